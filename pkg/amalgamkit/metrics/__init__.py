__all__ = ["ball", "distortion", "verdict", "report"]
