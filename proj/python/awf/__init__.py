"""Affine wavelet frames on R^d x| <A>: Calderon sums, frame bounds, quasi-lattices."""

import json
import os

from ._core import *  # noqa: F401,F403
from ._core import Error, run_json, resolved_config_json, subcommands


def _text(config):
    return config if isinstance(config, str) else json.dumps(config)


def run(name, config=None, base_dir="."):
    """Run a subcommand and return its report as a dict.

    `config` is a dict or JSON text; relative wavelet files resolve against `base_dir`.
    """
    return json.loads(run_json(name, _text(config or {}), os.fspath(base_dir)))


def resolve_config(config=None, base_dir="."):
    return json.loads(resolved_config_json(_text(config or {}), os.fspath(base_dir)))


__all__ = ["run", "resolve_config", "subcommands", "Error"]
