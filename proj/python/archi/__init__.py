"""Shape reconstruction from complex area moments (bindings over the C++ core)."""

from ._archi import (
    BergmanBasis,
    ConvergenceError,
    GeometryError,
    MomentFrame,
    MomentMatrix,
    ParseError,
    PointSet,
    Precision,
    RangeError,
    Scene,
    __version__,
    hausdorff,
    list_suites,
    natural_frame,
    orthogonalize,
    reconstruct,
    scene_moments,
    verify,
)


def moments_of(scene, n, which=PointSet.GStar, precision=Precision.dd):
    """Moments of a scene in its natural frame."""
    if isinstance(scene, str):
        scene = Scene.parse(scene)
    return scene_moments(scene, n, which, precision, natural_frame(scene))


__all__ = [
    "BergmanBasis",
    "ConvergenceError",
    "GeometryError",
    "MomentFrame",
    "MomentMatrix",
    "ParseError",
    "PointSet",
    "Precision",
    "RangeError",
    "Scene",
    "__version__",
    "hausdorff",
    "list_suites",
    "moments_of",
    "natural_frame",
    "orthogonalize",
    "reconstruct",
    "scene_moments",
    "verify",
]
