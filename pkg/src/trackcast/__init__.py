"""trackcast: synthetic scenes -> noisy detections -> online tracking -> dynamic maps -> multimodal trajectory prediction."""

__version__ = "0.1.0"

from .geometry import OrientedBox, Pose2  # noqa: F401
