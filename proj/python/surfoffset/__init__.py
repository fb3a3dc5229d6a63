"""Geodesic offset curves of source curves on analytic parametric surfaces.

The heavy lifting lives in the C++ extension `surfoffset._core`; this
package re-exports its public surface.
"""

from surfoffset._core import (
    ConfigError,
    NumericError,
    Region,
    SourceCurve,
    Surface,
    circle_uv,
    classify_inside,
    closing,
    const_v_loop,
    dilate,
    erode,
    geodesic_distance,
    hausdorff_cd,
    offset_curve,
    opening,
    region_area,
)

__all__ = [
    "ConfigError",
    "NumericError",
    "Region",
    "SourceCurve",
    "Surface",
    "circle_uv",
    "classify_inside",
    "closing",
    "const_v_loop",
    "dilate",
    "erode",
    "geodesic_distance",
    "hausdorff_cd",
    "offset_curve",
    "opening",
    "region_area",
]

__version__ = "0.1.0"
