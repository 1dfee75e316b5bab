"""Certified maximal-function computations for self-similar measures on the line."""

from .exact import Enclosure, LogRatio, parse_rational
from .measures import (IFSMeasure, MeasureSum, cantor_measure, cdf_eval, cdf_integral, load_measure,
                       measure_of_interval, parse_measure, quarter_cantor_measure, sum_measures)
from .maximal import Detached, MaximalResult, Undetermined, average, contact_classify, maximal_local, maximal_restricted
from .covering import Gap, besicovitch_select, density_check_L1, density_check_L2, gap_enumerate, vitali_select
from .gaps import (delta0_estimate, detachment_check, gap_image_family, image_measure_bound, inductive_claim1,
                   inductive_claim2)
from .cantor import TernaryPoint, cantor_value, excluded_interval_cover, pattern_scan, toy_gap_construct

__all__ = [
    "Enclosure", "LogRatio", "parse_rational",
    "IFSMeasure", "MeasureSum", "cantor_measure", "quarter_cantor_measure", "parse_measure", "load_measure",
    "sum_measures", "cdf_eval", "cdf_integral", "measure_of_interval",
    "Detached", "Undetermined", "MaximalResult", "average", "maximal_local", "maximal_restricted", "contact_classify",
    "Gap", "gap_enumerate", "besicovitch_select", "vitali_select", "density_check_L1", "density_check_L2",
    "detachment_check", "gap_image_family", "image_measure_bound", "delta0_estimate", "inductive_claim1",
    "inductive_claim2",
    "TernaryPoint", "cantor_value", "toy_gap_construct", "pattern_scan", "excluded_interval_cover",
]
