"""Joint beamforming and jamming for IRS-assisted secure MISO links without Eve's CSI."""

__version__ = "0.1.0"

from .channel import (ChannelSet, ScenarioConfig, effective_bob_channel, effective_eve_channel,
                      generate_channels)
from .phase_opt import QuadraticForm, SolveTrace, build_quadratic, grid_oracle, mm_solve, om_solve
from .transmit import RateReport, TransmitDesign, design_transmission

__all__ = [
    "ChannelSet", "ScenarioConfig", "effective_bob_channel", "effective_eve_channel",
    "generate_channels", "QuadraticForm", "SolveTrace", "build_quadratic", "grid_oracle",
    "mm_solve", "om_solve", "RateReport", "TransmitDesign", "design_transmission",
]
