"""Exact rational points on twisted Kummer pencils d(1 + a^2 T^4) Y^2 = X^3 - X.

The library constructs and certifies rational points through quadratic-twist
parametrization: quartic torsors C s^2 = 1 + a^2 t^4 and congruent-number
twists D y^2 = x^3 - x are searched exactly, identified with Weierstrass
models, and glued into surface points; local-solubility and root-number
criteria plus Selmer-bound bookkeeping keep every certificate honest.
"""

from .numtheory import (
    Factorization,
    FactorizationBudgetError,
    SquarefreeClass,
    factorize,
    is_fourth_power_mod_p,
    jacobi_symbol,
    squarefree_class,
)
from .elliptic import (
    INFINITY,
    MINUS,
    PLUS,
    ExternalFact,
    Point,
    RankPositivityCertificate,
    SearchFound,
    TwistedCurve,
    WeierstrassCurve,
    add,
    certify_positive_rank,
    denormalize_twist,
    normalize_twist,
    on_curve,
    scalar_mul,
    search_points,
    torsion_test,
)
from .quartic import (
    BirationalIdentification,
    QuarticTorsor,
    TorsorPoint,
    TransportError,
    hyperelliptic_involution,
    invariants,
    search_torsor_points,
    to_weierstrass_with_point,
    transported_add,
    weierstrass_model,
)
from .criteria import (
    SelmerLedger,
    SolubilityVerdict,
    StarStarVerdict,
    brute_local_solubility,
    expected_rank_family,
    fiber_prime_check,
    root_number,
    selmer_upper_bound,
    solubility_a1,
    solubility_a2,
    star_star_verdict,
    two_isogeny_image,
)
from .surface import (
    Atlas,
    SprCertificate,
    SprOutcome,
    SurfaceFamily,
    SurfacePoint,
    atlas_generate,
    evaluation_class,
    fiber_twist_class,
    phi_map,
    spr_check,
    surface_contains,
)
from .diagnostics import (
    DensityReport,
    RankJumpRow,
    density_report,
    rank_jump_table,
    root_number_survey,
)

__version__ = "0.1.0"
