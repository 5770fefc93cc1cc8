"""Cell-free massive MIMO uplink simulator with transmit power control.

Pipeline: channel realizations -> pilot phase -> per-AP MMSE channel
estimates -> zero-forcing combining -> per-UE SINR/SE/EE metrics,
with three power-control policies (max power, max-min SE, max-min EE)
and a Monte Carlo harness on top.
"""

from .channel import (BOLTZMANN_J_PER_K, ChannelRealization,
                      MeasurementTensor, beta_from_measurements,
                      effective_pilot_snr, generate_channel,
                      load_measurement_csv, noise_power,
                      realization_from_instance, transmit_snr)
from .combining import (InterferenceProfile, PerUEMetrics, PowerAllocation,
                        energy_efficiency, interference_profile,
                        sinr_and_se, zf_weights)
from .config import (ExperimentSpec, Geometry, SolverSettings, SystemConfig,
                     load_experiment, parse_experiment)
from .errors import (CellfreeError, ConfigError, Infeasible,
                     InfeasibleTargetSE, IngestError, PlacementError,
                     RankDeficient)
from .estimation import (ChannelEstimate, PilotBook, estimate_channel,
                         estimation_error, mmse_estimate, orthogonal_pilots,
                         pilot_phase)
from .harness import (CdfSeries, MetricRecord, RunResult, SweepRow,
                      empirical_cdf, median, run_experiment, sweep_power)
from .tpc import (TpcResult, active_backend, available_backends,
                  max_min_ee, max_min_se, max_power, min_power_for_sinr,
                  set_backend)

__version__ = "0.1.0"
