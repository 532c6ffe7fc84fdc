"""Exact bivariate stochastic dominance checks for discrete distributions."""

from .distribution import (
    UNIT_FRAME,
    BivariateStepCdf,
    CommonFrame,
    SampleSet,
    StepCdf,
    build_cdf,
    build_common_frame,
    build_pair,
    cdf_from_atoms,
    eval_cdf,
    marginal_x,
    marginal_y,
    merge_grids,
    quasi_volume,
)
from .errors import BisdError, FrameMismatchError, InvalidInputError, ParseError
from .first_order import check_first_order_submodular, check_first_order_supermodular, k_sheet
from .inference import bootstrap_pvalues
from .report import ConditionReport
from .second_order import (
    check_second_order_submodular,
    check_second_order_supermodular,
    h_surface,
    l_surface,
)
from .stieltjes import (
    Partition,
    decompose_sum,
    exact_expectation,
    partition_sum,
    supermodular_form,
)
from .testfuncs import TestFunction, classify, cone_combine, resolve
from .univariate import s_operator, sd_check, step_cdf
from .verdict import DominanceVerdict, Witness
from .verify import CampaignConfig, CampaignReport, boundary_counterexample, run_campaign

__version__ = "0.1.0"

__all__ = [
    "UNIT_FRAME",
    "BisdError",
    "BivariateStepCdf",
    "CampaignConfig",
    "CampaignReport",
    "CommonFrame",
    "ConditionReport",
    "DominanceVerdict",
    "FrameMismatchError",
    "InvalidInputError",
    "ParseError",
    "Partition",
    "SampleSet",
    "StepCdf",
    "TestFunction",
    "Witness",
    "boundary_counterexample",
    "bootstrap_pvalues",
    "build_cdf",
    "build_common_frame",
    "build_pair",
    "cdf_from_atoms",
    "check_first_order_submodular",
    "check_first_order_supermodular",
    "check_second_order_submodular",
    "check_second_order_supermodular",
    "classify",
    "cone_combine",
    "decompose_sum",
    "eval_cdf",
    "exact_expectation",
    "h_surface",
    "k_sheet",
    "l_surface",
    "marginal_x",
    "marginal_y",
    "merge_grids",
    "partition_sum",
    "quasi_volume",
    "resolve",
    "run_campaign",
    "s_operator",
    "sd_check",
    "step_cdf",
    "supermodular_form",
]
