"""Exact equivariant localization on torus-action fixed-point data."""

from .charclass import (
    TruncatedClass,
    chern_restriction,
    component_contribution,
    elementary_symmetric,
    euler_class_at,
    inverse_euler_component,
    moment_power_class,
)
from .errors import (
    DenominatorVanishes,
    EqlocError,
    ModelError,
    ModelParseError,
    NonConstantVolume,
    NonPolynomialResult,
    RankMismatch,
    UnsupportedComponentProduct,
    WeightCollapsesToZero,
)
from .exactalg import (
    LinearForm,
    LinFactoredRational,
    Polynomial,
    parse_polynomial,
    parse_rational,
    poly_add,
    poly_divide_linear,
    poly_mul,
    rat_add,
    rat_eval,
    rat_mul,
)
from .localize import (
    LocalizationResult,
    PowerOfOmegaBar,
    dh_closed_form,
    dh_series,
    dh_volume,
    euler_characteristic,
    localize,
    power_integral,
)
from .model import (
    FixedComponent,
    FixedPoint,
    TorusModel,
    builtin_cpn,
    builtin_gaussian,
    builtin_s2,
    load_model,
    parse_builtin,
    permute_variables,
    product,
    render_model,
    subtorus_restrict,
)

__version__ = "0.1.0"
