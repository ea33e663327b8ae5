"""Python front end to the qslack C++ core."""

import json

from ._core import (
    ConfigError,
    hoeffding_shots,
    lp_classical_cham_value,
    negativity,
    problems,
    root_fidelity,
    sdp_cham_value,
    trace_distance,
    tvd,
)
from ._core import run as _run

__all__ = [
    "ConfigError",
    "hoeffding_shots",
    "lp_classical_cham_value",
    "negativity",
    "problems",
    "root_fidelity",
    "run",
    "sdp_cham_value",
    "trace_distance",
    "tvd",
]


def run(config, output_root=None):
    """Run an experiment from a dict or JSON string and return per-run results."""
    text = config if isinstance(config, str) else json.dumps(config)
    return _run(text, output_root)
