"""Data-integrity trust scoring for a sensor hub under manipulation attacks.

A deterministic, seedable simulator and scoring library: a stochastic model
of an imperfect ternary anomaly monitor, Bayesian beliefs over its verdict
counts, prospect-theoretic and expected-utility integrity scores, and
bounded trust scores maintained by cumulative, exponential, and asymmetric
weighted moving averages (the latter built to withstand On-Off attackers).
"""

__version__ = "0.1.0"

from .adversary import (  # noqa: F401
    OnOffSchedule,
    Stage,
    onoff_attack_slot,
    standard_onoff_schedules,
    uniform_attack_slot,
)
from .bayes import BeliefVector, marginal_evidence, multinomial_likelihood, posterior  # noqa: F401
from .config import (  # noqa: F401
    ConfigError,
    ScenarioConfig,
    apply_overrides,
    build_config,
    default_config,
    effective_dict,
    load_raw_config,
)
from .harness import (  # noqa: F401
    FIGURES,
    SlotRecord,
    reproduce_figure,
    run_scenario,
    sweep,
    write_run_csv,
    write_sweep_csv,
)
from .integrity import (  # noqa: F401
    CostModel,
    DeviationVector,
    PTParams,
    deviations,
    eut_utility,
    pt_utility,
    value,
    weight,
)
from .monitor import (  # noqa: F401
    MonitorProfile,
    ObservationCounts,
    Outcome,
    observe,
    profile_from_pdetect,
)
from .trust_update import (  # noqa: F401
    AwmaParams,
    TrustState,
    awma_step,
    cwma_step,
    ewma_step,
    weighted_score,
)
