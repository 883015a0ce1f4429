"""Detection of hidden periodicities in functional and multivariate time series.

The test statistic is the maximum of the (filtered, standardized)
periodogram over the fundamental frequencies, calibrated against its Gumbel
limit.  See :mod:`fperiod.testing` for the tests, :mod:`fperiod.simulate`
for the Monte Carlo harness, and :mod:`fperiod.cli` for the command line.
"""

from .distributions import (
    HypoExpSpec,
    centering_b,
    centering_b_limit,
    centering_c,
    gumbel_cdf,
    gumbel_quantile,
    hypoexp_cdf,
    hypoexp_sample,
    max_hypoexp_standardized,
)
from .errors import DegeneracyError
from .hilbert import EigenSystem, complex_inner, hs_norm, inv_sqrt, sym_eigen, tensor
from .ingest import (
    BasisSpec,
    GridSeries,
    fit_basis,
    fourier_design,
    read_coef_csv,
    read_grid_csv,
    write_coef_csv,
    write_report,
)
from .model import (
    FarModel,
    InnovationCov,
    estimate_far1,
    far1_inverse_filters,
    innovation_cov,
    lag_autocov,
    operator_norm,
    residuals,
    select_a_n,
    transfer_operator,
)
from .simulate import (
    BootstrapInnovations,
    DgpSpec,
    GaussianInnovations,
    McResult,
    SignalSpec,
    bootstrap_innovations,
    draw_period,
    gen_far1,
    monte_carlo,
)
from .spectral import (
    DftTable,
    FrequencyGrid,
    MaxResult,
    dft,
    filter_dft,
    full_dft,
    fundamental_frequencies,
    max_norm,
    periodogram_norms,
    periodogram_operator,
)
from .testing import TestOptions, TestReport, mv_filtered_test, mv_iid_test, tn_spectrum, tn_test

__version__ = "0.1.0"

__all__ = [
    "BasisSpec",
    "BootstrapInnovations",
    "DegeneracyError",
    "DftTable",
    "DgpSpec",
    "EigenSystem",
    "FarModel",
    "FrequencyGrid",
    "GaussianInnovations",
    "GridSeries",
    "HypoExpSpec",
    "InnovationCov",
    "MaxResult",
    "McResult",
    "SignalSpec",
    "TestOptions",
    "TestReport",
    "bootstrap_innovations",
    "centering_b",
    "centering_b_limit",
    "centering_c",
    "complex_inner",
    "dft",
    "draw_period",
    "estimate_far1",
    "far1_inverse_filters",
    "filter_dft",
    "fit_basis",
    "fourier_design",
    "full_dft",
    "fundamental_frequencies",
    "gen_far1",
    "gumbel_cdf",
    "gumbel_quantile",
    "hs_norm",
    "hypoexp_cdf",
    "hypoexp_sample",
    "innovation_cov",
    "inv_sqrt",
    "lag_autocov",
    "max_hypoexp_standardized",
    "max_norm",
    "monte_carlo",
    "mv_filtered_test",
    "mv_iid_test",
    "operator_norm",
    "periodogram_norms",
    "periodogram_operator",
    "read_coef_csv",
    "read_grid_csv",
    "residuals",
    "select_a_n",
    "sym_eigen",
    "tensor",
    "tn_spectrum",
    "tn_test",
    "transfer_operator",
    "write_coef_csv",
    "write_report",
]
