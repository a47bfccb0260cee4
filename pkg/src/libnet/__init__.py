"""Interference and SINR analysis for Poisson networks of Li-Fi balloons."""

from .analytic import (
    AnalyticResult,
    MeanInterferenceInputs,
    campbell_integral,
    laplace_functional,
    mean_interference,
    mean_interference_1d,
    mean_interference_2d,
)
from .channel import LambertianChannel, Receiver, fov_gate, lambertian_order, path_gain, sinr
from .config import ScenarioConfig, load_config, write_config
from .hypergeom import hyp2f1
from .montecarlo import (
    EmpiricalResult,
    McConfig,
    compare,
    empirical_laplace,
    empirical_mean_interference,
    sinr_samples,
)
from .sampler import PointField, Region, expected_count, sample_ppp

__version__ = "0.1.0"
