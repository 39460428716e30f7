"""surfpos: exact local positivity on algebraic surfaces.

Zariski decompositions, Newton-Okounkov polygons, infinitesimal polygons,
and Seshadri-type invariants over exact rational (and real quadratic)
arithmetic, for surfaces presented as finite intersection-lattice models.
"""

from .errors import SurfposError
from .infinitesimal import (
    BlowupSpec,
    InfFlagSpec,
    MovingSeshadri,
    SeshadriStatus,
    blow_up,
    generic_infinitesimal_polygon,
    infinitesimal_polygon,
    moving_seshadri,
    mu_prime,
    vertex_t_coordinates,
    xi,
)
from .lattice import (
    CurveRecord,
    PointSpec,
    PolyCone,
    SurfaceModel,
    cone_contains,
    dual_cone,
    pairing,
)
from .models import builtin, enumerate_minus_one_curves, load, save
from .okounkov import (
    Classification,
    NOPolygon,
    classify_valuative,
    criterion_at_point,
    largest_inverted_simplex,
    largest_simplex,
    mu_sup,
    okounkov_polygon,
    polygon_area,
    shift_check,
    vertical_slice,
)
from .scalars import ExactScalar, Quad, positive_quadratic_root, quad
from .seshadri import (
    GenericBoundQuery,
    GenericBoundResult,
    default_free_bundle,
    free_multiple,
    generic_seshadri_bound,
    largest_simplex_flag,
    largest_simplex_search,
    seshadri_direct,
)
from .zariski import (
    LocusReport,
    ZariskiPair,
    ample_perturbation,
    is_ample,
    is_big,
    is_nef,
    loci,
    volume,
    zariski_decompose,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
