"""Five-parameter Variance-Gamma option pricing toolkit.

Model functions (characteristic function, MGF, cumulants, Levy density),
an Esscher martingale measure, two independent European-call engines
(tilted-CDF quadrature and damped-contour fractional FFT), the VG density
by two routes, and a Gamma-OU path simulator with statistical checks.
"""

from .density import (
    DensityGrid,
    cdf_fourier,
    cdf_mixture,
    density_grid,
    esscher_pdf,
    mgf_quadrature,
    pdf_fourier,
    pdf_mixture,
)
from .errors import (
    BracketError,
    BranchFailure,
    DomainError,
    FracRange,
    GridError,
    HorizonError,
    LengthError,
    NoBracket,
    NonFiniteSample,
    NotSolvable,
    NumericalError,
    OutOfDomain,
    OutOfStrip,
    StripError,
    TailError,
    ValidationError,
    VGError,
)
from .esscher import EsscherMeasure, g_ratio, martingale_check, solvability, solve_h_star
from .model import (
    Cumulants,
    KoBoLClass,
    MgfStrip,
    SteepnessPair,
    VGParams,
    annualized_daily_params,
    asymptotic_normal_params,
    char_exponent,
    char_fn,
    cumulants,
    esscher_tilted_params,
    kobol_classify,
    levy_density,
    mgf,
    mgf_strip,
    steepness,
)
from .numerics import (
    NewtonCotesRule,
    composite_integrate,
    fft,
    fourier_integral_grid,
    frft,
    golden_minimize,
    newton_cotes_12_weights,
    power_tail_integral,
    solve_monotone,
    std_normal_cdf,
)
from .pricing import (
    FourierGrid,
    MarketContext,
    PriceQuote,
    black_scholes,
    calibrate_q,
    default_damping,
    er_objective,
    error_surface,
    payoff_recover,
    payoff_transform,
    price_extended,
    price_generalized,
    price_surface,
)
from .simulate import (
    OUConfig,
    PathBundle,
    asymptotic_normality_test,
    integrate_variance,
    ks_critical_value,
    ks_statistic,
    ou_transition_cf,
    simulate_bdlp,
    simulate_ou,
    simulate_terminal,
    simulate_vg_increments,
    simulate_vg_path,
)

__version__ = "0.1.0"
