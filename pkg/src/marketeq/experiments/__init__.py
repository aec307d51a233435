from typing import List

from marketeq.experiments.generators import (
    DATASETS,
    GeneratorSpec,
    gen_random_concave_value,
    generate_dataset,
    generate_instance,
    instance_rng,
    valuation_digest,
)
from marketeq.experiments.records import STUDIES, ExperimentRecord, SurvivalPoint
from marketeq.experiments.studies import (
    ExperimentSpec,
    StudyConfig,
    StudyResult,
    existence_census,
    revenue_study,
    run_experiment,
    stability_study,
    summary_document,
    survival_curve,
)

__all__: List[str] = [
    "DATASETS",
    "STUDIES",
    "GeneratorSpec",
    "ExperimentRecord",
    "SurvivalPoint",
    "ExperimentSpec",
    "StudyConfig",
    "StudyResult",
    "gen_random_concave_value",
    "generate_dataset",
    "generate_instance",
    "instance_rng",
    "valuation_digest",
    "existence_census",
    "revenue_study",
    "run_experiment",
    "stability_study",
    "summary_document",
    "survival_curve",
]
