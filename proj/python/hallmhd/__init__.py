"""Axisymmetric Hall-MHD simulator and verification harness."""

from ._hallmhd import (
    ConfigError,
    FormatError,
    NumericalError,
    RunConfig,
    config_keys,
    diag_columns,
    initial_state,
    load_config,
    lp_battery,
    mms,
    oracle_battery,
    parse_config,
    read_diagnostics,
    read_snapshot,
    run,
    serialize_config,
    verify,
    write_diagnostics,
)

__all__ = [
    "ConfigError",
    "FormatError",
    "NumericalError",
    "RunConfig",
    "config_keys",
    "diag_columns",
    "initial_state",
    "load_config",
    "lp_battery",
    "mms",
    "oracle_battery",
    "parse_config",
    "read_diagnostics",
    "read_snapshot",
    "run",
    "serialize_config",
    "verify",
    "write_diagnostics",
]
