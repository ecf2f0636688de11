from .builder import Builder, build_change, build_drift, build_law, load_theta

__all__ = [
    "Builder",
    "build_law",
    "build_change",
    "build_drift",
    "load_theta",
]
