"""Exact quench dynamics of the 1D transverse-field Ising chain, analyzed
with recurrence plots and recurrence quantification."""

from .pfaffian import pfaffian, pfaffian_bruteforce
from .pipeline import (
    SweepConfig,
    SweepResult,
    build_sweep_config,
    default_field_grid,
    parse_config_file,
    rescale_time,
    run_sweep,
    select_window,
)
from .recurrence import (
    EmbeddingConfig,
    RecurrencePlot,
    RQAReport,
    TimeSeries,
    diagonal_histogram,
    distance_matrix,
    embed,
    export_rp,
    rqa,
    threshold_by_rate,
    vertical_histogram,
)
from .spectral import SpectrumReport, ipr, mean_abs
from .tfim import (
    CorrelatorSeries,
    MajoranaContractions,
    ModeTable,
    QuenchSpec,
    build_modes,
    contractions_at,
    fermi_time,
    max_velocity,
    revival_period,
    rho_xx,
    rho_zz_connected,
    simulate_series,
)

__version__ = "0.1.0"
