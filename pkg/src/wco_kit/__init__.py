"""Averages of weighted composition operators on weighted Dirichlet spaces."""

import os as _os

# WCO_KIT_THREADS caps the BLAS pools; it only takes effect before numpy loads
_threads = _os.environ.get("WCO_KIT_THREADS")
if _threads and _threads.isdigit() and int(_threads) > 0:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

from .bounds import (BoundReport, LinearFractionalData, Theorem3Result, delta, lf_data, prop4_bound,  # noqa: E402
                     prop4_conditions, sharp_h2_integral, theorem3_bound)
from .dirichlet import AnalyticSeries, coeffs_from_samples, dirichlet_norm, growth_majorant  # noqa: E402
from .estimator import IntegralOperator  # noqa: E402
from .exceptions import *  # noqa: E402,F401,F403
from .funcmaps import Circle, ExpMap, Polynomial, RationalMap, circle_through_three_points  # noqa: E402
from .generator import (GeneratorInput, derive_q, generated_kernel, generated_spec,  # noqa: E402
                        table6_input, verify_generated)
from .geometry import arc_of_t, selfmap_certificate_exact, t_mobius  # noqa: E402
from .matrices import (M1Params, M2Params, finite_section, operator_coefficients,  # noqa: E402
                       spectral_norm, truncate)
from .operator import (Certificate, OperatorSpec, apply_composed, apply_direct, kernel, preset,  # noqa: E402
                       selfmap_condition_sampled, well_defined_at, well_defined_certificate)
from .quadrature import QuadratureConfig  # noqa: E402

__version__ = "0.1.0"
