"""Order-k planar tessellations with exact rational geometry.

Point sets live in windowed rational coordinates (pointsets), depth-changing
circle events are enumerated exactly (events), angle statistics and window
extremes follow from the events (angles), and the four tilings plus their
duality and lifted-hull checks are built per order (tilings).  Poisson limit
densities and the non-monotone construction round things out
(distributions, counterexample).
"""

from .errors import (CollinearError, ConstructionFailureError,
                     DegenerateAngleError, DepthUnpopulatedError,
                     DiskOutsideWindowError, DomainError, EmptySampleError,
                     GenericityFailure, IncompleteCorrespondenceError,
                     InvalidParamsError, NonGenericUnsupportedError,
                     OracleInconsistencyError, OrderOutOfRangeError,
                     OrdertessError, WindowTooSmallError)
from .exactgeom import (ExactCircle, ExactPoint, Side, angle_at, circumcircle,
                        dist2, orient2d, side_of)
from .pointsets import (Rect, WindowedSet, integer_lattice, load_pointset,
                        non_cocircular_lattice, perturbed_lattice,
                        poisson_torus, random_periodic, save_pointset)
from .events import CircleEvent, EventSet, enumerate_events, max_usable_order
from .angles import (DepthTables, depth_tables, extreme_angles,
                     monotonicity_report, structure_angles, zone_angles)
from .tilings import (Tiling, brillouin_tessellation, check_orthogonal_dual,
                      delaunay_mosaic, iglesias_mosaic, lifted_hull_oracle,
                      voronoi_tessellation)
from .distributions import (MILES_F, MILES_G, MILES_H, empirical_density,
                            fit_report, h_second_derivative, miles_density,
                            vertex_density_report)
from .counterexample import (CounterexampleParams, build_counterexample,
                             verify_counterexample)

__version__ = "0.1.0"
