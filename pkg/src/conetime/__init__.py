"""Stationary flat (2+1)-spacetimes built from Euclidean cone surfaces.

The library covers five layers:

- ``surface``: glued-triangle cone surfaces, angles, distances,
  injectivity radii;
- ``geodesics``/``tracing``: straight-line tracing across charts, loop
  enumeration, the analytic single-cone geodesic theory;
- ``one_form``: closed discrete 1-forms with prescribed residues,
  integration, gauge moves, loop-ratio certification;
- ``particle``: the analytic one-particle model (return times,
  directions, thresholds, parameter inference);
- ``spacetime``: surfaces plus 1-forms as spacetimes, geodesic lifts,
  light-signal timing, paradox detection, the global-hyperbolicity
  checker.

File formats live in ``io``; ready-made surfaces in ``library``; the
``conetime`` console script in ``cli``.
"""

from .errors import *  # noqa: F401,F403
from .exact import ExactAngle, parse_angle
from .surface import ConeSurface, Isometry, Triangle, VertexClass
from .tracing import DirectionState, GeodesicLoop, Segment, TracedGeodesic
from .geodesics import (
    chord_in_disk,
    loops_at,
    single_cone_connection,
    SingleConeConnection,
    trace,
)
from .one_form import (
    EdgeCochain,
    GaugeFunction,
    LoopRatioReport,
    add_coboundary,
    build_cochain,
    integrate,
    loop_ratio_report,
    vertex_loop_polyline,
)
from .particle import (
    AdaptedPoint,
    ObserverLine,
    ParticleModel,
    RegionClass,
    SingleConePlane,
    WedgeIsometry,
    admissible_windings,
    classify_region,
    develop,
    from_adapted_coords,
    infer_parameters,
    is_finite_quotient,
    metric_value,
    null_interval_residual,
    positivity_threshold,
    return_direction,
    return_time,
    return_time_static,
    to_adapted_coords,
)
from .spacetime import (
    GHReport,
    LightSignal,
    LiftedPath,
    StationarySpacetime,
    cone_polygon_signal,
    gh_check,
    is_paradoxical,
    leg_ctc_contacts,
    lift_geodesic,
    paradox_guard,
    point_at_cone_polar,
    signal_time,
)
from .io import build_surface, load_omega, load_signal, write_omega, write_surface
from . import library

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
