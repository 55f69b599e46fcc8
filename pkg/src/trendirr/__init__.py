"""Time-irreversibility and market-inefficiency indices for time series.

The irreversibility index compares the duration distributions of uptrends
and downtrends with a KL divergence; the inefficiency index measures how
predictable the next return sign is from the previous few. Both are tested
against shuffle surrogates.
"""

__version__ = "0.1.0"

from .divergence import (
    IrreversibilityResult,
    kl_divergence,
    rw_entropy_production,
    rw_kl_down_up,
    rw_kl_up_down,
    trend_irreversibility,
)
from .efficiency import InefficiencyResult, block_entropy, block_table, inefficiency_index
from .errors import (
    DivergenceUndefinedError,
    GenerationError,
    IngestError,
    InsufficientDataError,
    InvalidInputError,
    TrendIrrError,
    UndefinedCorrelationError,
)
from .ingest import IngestReport, OhlcvRecord, build_log_returns_with_imputation, parse_csv
from .series import BinarySeries, LogReturnSeries, PriceSeries, binarize, log_returns
from .surrogate import SurrogateEnsembleResult, shuffle_surrogate, significance_test
from .synth import ProcessSpec, gen_ar2, gen_nar2, gen_random_walk, sample_laplace
from .trends import EmpiricalDistribution, TrendDurations, empirical_distribution, extract_trend_durations
from .windows import WindowConfig, WindowResult, pearson_correlation, run_windows
