"""
Run Configuration
=================
RunConfig collects everything one CLI command needs. Values come from
command-line flags, then from an optional config file, then from defaults.

Config file format (flat, one setting per line):

    # comment
    pa = 5
    q-range = 0.51:0.99:0.01
    format = json

Keys are the long flag names; '-' and '_' are interchangeable.
"""

import logging
import os
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

import click

from gausscap.errors import DomainError

logger = logging.getLogger(__name__)

JOBS_ENV = "GAUSSCAP_JOBS"


class Command(Enum):
    CAPACITY   = "capacity"
    FIGURES    = "figures"
    CROSSCHECK = "crosscheck"
    WITNESS    = "witness"


class OutputFormat(Enum):
    CSV  = "csv"
    JSON = "json"


class ConfigError(DomainError):
    """Malformed config file or inconsistent settings."""


@dataclass
class RunConfig:
    command:    Command
    qs:         List[float]             = field(default_factory=list)
    p_a:        float                   = 1.0
    p_e:        float                   = 1.0
    cutoff:     int                     = 60
    tol:        float                   = 1e-6
    output:     Optional[Path]          = None
    fmt:        OutputFormat            = OutputFormat.CSV
    jobs:       int                     = 1
    n_max:      int                     = 50
    eps_grid:   Tuple[float, ...]       = ()
    rational:   Optional[Tuple[int, int]] = None
    report:     Optional[Path]          = None

    def __post_init__(self):
        if self.command is not Command.WITNESS and self.command is not Command.FIGURES and not self.qs:
            raise ConfigError("the q grid is empty")
        if self.command is Command.WITNESS and not self.qs and self.rational is None:
            raise ConfigError("witness needs --q or --rational")
        if self.tol <= 0:
            raise ConfigError(f"tolerance must be > 0, got {self.tol}")
        if any(e <= 0 for e in self.eps_grid):
            raise ConfigError("eps values must be > 0")
        if self.cutoff < 2:
            raise ConfigError(f"cutoff must be >= 2, got {self.cutoff}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        if self.p_a < 0 or self.p_e < 0:
            raise ConfigError(f"energies must be >= 0, got P_A={self.p_a}, P_E={self.p_e}")


# ── Config file ────────────────────────────────────────────────────────────────
def _normalize_key(key: str) -> str:
    return key.strip().lower().replace("-", "_")


def load_config_file(path: Path) -> Dict[str, str]:
    """Read ``key = value`` lines into a dict keyed by parameter name."""
    settings: Dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        settings[_normalize_key(key)] = value.strip()
    logger.debug("loaded %d settings from %s", len(settings), path)
    return settings


def build_default_map(settings: Dict[str, str], commands: Dict[str, Dict[str, str]]) -> Dict[str, Dict[str, str]]:
    """Distribute flat settings to every command that has an option of that name.

    ``commands`` maps a command name to {config key: parameter name}.
    """
    default_map: Dict[str, Dict[str, str]] = {}
    used = set()
    for name, keys in commands.items():
        chosen = {keys[k]: v for k, v in settings.items() if k in keys}
        used.update(k for k in settings if k in keys)
        if chosen:
            default_map[name] = chosen
    unknown = sorted(set(settings) - used)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return default_map


# ── Worker count ───────────────────────────────────────────────────────────────
def resolve_jobs(flag: Optional[int]) -> int:
    """GAUSSCAP_JOBS beats --jobs; the default is the CPU count."""
    env = os.environ.get(JOBS_ENV)
    if env:
        try:
            jobs = int(env)
        except ValueError:
            raise ConfigError(f"{JOBS_ENV} must be an integer, got {env!r}")
        if jobs < 1:
            raise ConfigError(f"{JOBS_ENV} must be >= 1, got {jobs}")
        return jobs
    if flag is not None:
        return flag
    return os.cpu_count() or 1


def option_keys(command: click.Command) -> Dict[str, str]:
    """Config keys accepted by a command: its long flag names and parameter names."""
    keys: Dict[str, str] = {}
    for param in command.params:
        if not isinstance(param, click.Option):
            continue
        keys[_normalize_key(param.name)] = param.name
        for opt in param.opts:
            if opt.startswith("--"):
                keys[_normalize_key(opt[2:])] = param.name
    return keys


def command_keys(commands: Iterable[Tuple[str, click.Command]]) -> Dict[str, Dict[str, str]]:
    return {name: option_keys(cmd) for name, cmd in commands}
