from eit_noise.cli.main import main

raise SystemExit(main())
