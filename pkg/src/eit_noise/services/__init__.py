from eit_noise.services.eit_service import EitNoiseService

__all__ = ["EitNoiseService"]
