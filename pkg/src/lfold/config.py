"""Run configuration: flat key=value files, environment, and flag overrides.

Precedence is flags > config file > environment > defaults. The file format
is deliberately trivial: one `key=value` per line, `#` comments, no sections.
"""

import os
from dataclasses import dataclass, field
from typing import Optional

DEFAULT_N = 1_000_000
DEFAULT_WEIGHT = 12
DEFAULT_DELTA = 0.3
CACHE_ENV_VAR = "LFOLD_CACHE"

CONFIG_KEYS = ("N", "weight", "ell", "X", "s", "delta", "out", "cache", "threads")


@dataclass
class RunConfig:
    N: int = DEFAULT_N
    weight: int = DEFAULT_WEIGHT
    ells: Optional[tuple] = None  # None: subcommand picks its default
    x_grid: Optional[tuple] = None
    s_values: tuple = (2 + 0j, 2.5 + 0j, 3 + 1j)
    delta: float = DEFAULT_DELTA
    out: str = "lfold-out"
    cache: str = field(default_factory=lambda: os.environ.get(CACHE_ENV_VAR, "lfold-cache"))
    threads: int = 1
    check: bool = False


def parse_ells(text):
    """'3..8' -> (3,...,8); '3,5,7' -> (3,5,7); '4' -> (4,)."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..")
        out = tuple(range(int(lo), int(hi) + 1))
    else:
        out = tuple(int(tok) for tok in text.split(","))
    if not out or any(e < 1 for e in out):
        raise ValueError(f"invalid ell list {text!r}")
    return out


def parse_s_values(text):
    """Comma-separated complex points, e.g. '2,2.5,3+1j'."""
    return tuple(complex(tok) for tok in text.strip().split(","))


def parse_x_grid(text):
    """'1e4..1e6' -> geometric grid (ratio 10^(1/8)); '100,1000' -> explicit points."""
    from .moments import geometric_grid

    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..")
        return tuple(int(x) for x in geometric_grid(int(float(lo)), int(float(hi))))
    return tuple(int(float(tok)) for tok in text.split(","))


def load_config_file(path):
    """Read a flat key=value file into a string dict."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {raw.rstrip()}")
            key, value = line.split("=", 1)
            key = key.strip()
            if key not in CONFIG_KEYS:
                raise ValueError(f"unknown config key {key!r}")
            out[key] = value.strip()
    return out


def build_config(args):
    """Merge an argparse namespace (and optional --config file) into a RunConfig."""
    cfg = RunConfig()
    file_vals = load_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(flag_name, file_key):
        flag = getattr(args, flag_name, None)
        if flag is not None:
            return flag
        return file_vals.get(file_key)

    n = pick("N", "N")
    if n is not None:
        cfg.N = int(float(n))
    weight = pick("weight", "weight")
    if weight is not None:
        cfg.weight = int(weight)
    ells = pick("ell", "ell")
    if ells is not None:
        cfg.ells = parse_ells(ells) if isinstance(ells, str) else tuple(ells)
    xg = pick("X", "X")
    if xg is not None:
        cfg.x_grid = parse_x_grid(xg) if isinstance(xg, str) else tuple(xg)
    sv = pick("s", "s")
    if sv is not None:
        cfg.s_values = parse_s_values(sv) if isinstance(sv, str) else tuple(sv)
    delta = pick("delta", "delta")
    if delta is not None:
        cfg.delta = float(delta)
    out = pick("out", "out")
    if out is not None:
        cfg.out = out
    cache = pick("cache", "cache")
    if cache is not None:
        cfg.cache = cache
    threads = pick("threads", "threads")
    if threads is not None:
        cfg.threads = int(threads)
    cfg.check = bool(getattr(args, "check", False))

    if cfg.N < 1 or cfg.threads < 1:
        raise ValueError("N and threads must be positive")
    if not 0.0 < cfg.delta < 1.0:
        raise ValueError(f"delta={cfg.delta} outside (0, 1)")
    if cfg.ells is not None and any(e < 1 for e in cfg.ells):
        raise ValueError("ell values must be >= 1")
    return cfg
