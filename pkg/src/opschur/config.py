"""Scenario configuration: a line-oriented key-value format with
`[scenario NAME]` section headers, full validation at parse time, and
positioned error messages.

Grammar (one construct per line):

    # comment                     blank lines and #-comments are skipped
    [scenario NAME]               opens a scenario; names must be unique
    key = value                   parameters for the open scenario

Values are integers, reals (`inf` allowed), comma-separated real lists,
or bare words, depending on the key.  Unknown kinds, unknown keys, and
inadmissible exponent combinations are rejected with the offending line.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .exponents import conjugate, inv

KINDS = (
    "schur-verify",
    "young-check",
    "besov-norm",
    "fm-check",
    "mikhlin-check",
    "lemma36-check",
    "corollary32-check",
)

SYMBOLS = ("identity", "scalar-decay", "block", "zero", "constant", "character")
KERNELS = ("circulant", "random-gaussian")
ROUTES = ("lq-lp", "besov")


@dataclass(frozen=True)
class Scenario:
    """One fully determined experiment: kind, parameters, seed."""

    name: str
    kind: str
    seed: int
    params: dict = field(default_factory=dict)


class ConfigError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        place = "" if line is None else f"line {line}: "
        super().__init__(f"{place}{message}")
        self.line = line


def _float(tok: str) -> float:
    if tok == "inf":
        return math.inf
    return float(tok)


def _int(tok: str) -> int:
    return int(tok, 10)


def _floats(tok: str) -> tuple:
    parts = [p.strip() for p in tok.split(",")]
    return tuple(_float(p) for p in parts if p != "")


def _word(allowed):
    def parse(tok: str):
        if tok not in allowed:
            raise ValueError(f"expected one of {', '.join(allowed)}, got {tok!r}")
        return tok

    return parse


# key -> (parser, default); None default means optional with kind-level default
_SCHEMAS = {
    "schur-verify": {
        "theta": (_float, None),
        "q": (_float, None),
        "tau": (_float, 1.0),
        "kernel": (_word(KERNELS), "random-gaussian"),
        "g": (_floats, None),
        "points": (_int, 6),
        "dim": (_int, 2),
        "restarts": (_int, 4),
        "iterations": (_int, 20),
        "sphere-budget": (_int, 200),
    },
    "young-check": {
        "theta": (_float, None),
        "q": (_float, None),
        "g": (_floats, None),
        "restarts": (_int, 4),
        "iterations": (_int, 30),
        "sphere-budget": (_int, 200),
    },
    "besov-norm": {
        "symbol": (_word(SYMBOLS), "constant"),
        "s": (_float, 0.0),
        "q": (_float, 2.0),
        "r": (_float, 1.0),
        "grid-n": (_int, 1),
        "grid-points": (_int, 32),
    },
    "fm-check": {
        "symbol": (_word(SYMBOLS), "identity"),
        "route": (_word(ROUTES), "lq-lp"),
        "u": (_float, 2.0),
        "q": (_float, None),
        "p": (_float, None),
        "s": (_float, 0.0),
        "r": (_float, math.inf),
        "grid-n": (_int, 1),
        "grid-points": (_int, 32),
        "restarts": (_int, 3),
        "iterations": (_int, 12),
        "sphere-budget": (_int, 100),
        "samples": (_int, 30),
    },
    "mikhlin-check": {
        "symbol": (_word(SYMBOLS), "identity"),
        "u": (_float, 2.0),
        "q": (_float, None),
        "p": (_float, None),
        "grid-n": (_int, 1),
        "grid-points": (_int, 64),
        "period": (_float, 16.0),
    },
    "lemma36-check": {
        "symbol": (_word(SYMBOLS), "identity"),
        "u": (_float, 2.0),
        "q": (_float, None),
        "p": (_float, None),
        "theta": (_float, None),
        "grid-n": (_int, 1),
        "grid-points": (_int, 64),
        "period": (_float, 16.0),
    },
    "corollary32-check": {
        "u": (_float, 2.0),
        "theta": (_float, 2.0),
        "grid-n": (_int, 1),
        "grid-points": (_int, 64),
        "samples": (_int, 40),
    },
}

_REQUIRED = {
    "schur-verify": ("theta", "q"),
    "young-check": ("theta", "q", "g"),
    "besov-norm": (),
    "fm-check": ("q", "p"),
    "mikhlin-check": ("q", "p"),
    "lemma36-check": ("q", "p", "theta"),
    "corollary32-check": (),
}


def _check_gap(u: float, p: float, q: float) -> bool:
    gap = inv(q) - inv(p)
    return -1e-12 <= gap <= inv(u) + 1e-12


def validate_scenario(
    name: str, kind: str, raw: dict, seed: int, line: Optional[int] = None
) -> Scenario:
    """Type-check keys against the kind's schema, fill defaults, and
    reject inadmissible exponent combinations."""
    if kind is None:
        raise ConfigError(f"scenario {name!r} has no kind", line)
    if kind not in _SCHEMAS:
        raise ConfigError(f"unknown kind {kind!r}", line)
    schema = _SCHEMAS[kind]
    params = {}
    for key, (parser, default) in schema.items():
        if key in raw:
            tok, key_line = raw[key]
            try:
                params[key] = parser(tok)
            except ValueError as exc:
                raise ConfigError(f"bad value for key {key!r}: {exc}", key_line)
        elif default is not None:
            params[key] = default
    for key, (tok, key_line) in raw.items():
        if key not in schema:
            raise ConfigError(f"unknown key {key!r} for kind {kind!r}", key_line)
    for key in _REQUIRED[kind]:
        if key not in params:
            raise ConfigError(f"scenario {name!r} missing required key {key!r}", line)

    if kind in ("schur-verify", "young-check"):
        theta, q = params["theta"], params["q"]
        if not (1.0 <= theta < math.inf):
            raise ConfigError(f"theta must lie in [1, inf), got {theta}", line)
        if not (1.0 <= q < conjugate(theta)) and not (theta == 1.0 and q == 1.0):
            raise ConfigError(
                f"(theta={theta}, q={q}) outside admissible region 1 <= q < theta'",
                line,
            )
        if kind == "schur-verify":
            if params["tau"] < 1.0:
                raise ConfigError(f"tau must be >= 1, got {params['tau']}", line)
            if params["kernel"] == "circulant" and "g" not in params:
                raise ConfigError("circulant kernel needs key 'g'", line)
    if kind in ("fm-check", "mikhlin-check", "lemma36-check"):
        if params["symbol"] == "character":
            raise ConfigError(
                "symbol 'character' is only available for besov-norm scenarios", line
            )
        if not _check_gap(params["u"], params["p"], params["q"]):
            raise ConfigError(
                f"(u={params['u']}, q={params['q']}, p={params['p']}) "
                "outside admissible region 0 <= 1/q - 1/p <= 1/u",
                line,
            )
    if kind == "lemma36-check" and params["theta"] < params["u"] - 1e-12:
        raise ConfigError("lemma36-check needs theta >= u", line)
    if kind == "corollary32-check":
        if params["theta"] > conjugate(params["u"]) + 1e-12:
            raise ConfigError("corollary32-check needs theta <= u'", line)
    return Scenario(name=name, kind=kind, seed=seed, params=params)


def parse_config(text: str) -> list:
    """Parse config text into validated scenarios (possibly none)."""
    scenarios = []
    seen = set()
    name = None
    kind = None
    seed = 0
    raw = {}
    open_line = None

    def close():
        if name is None:
            return
        scenarios.append(validate_scenario(name, kind, raw, seed, open_line))

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("["):
            if not (stripped.startswith("[scenario ") and stripped.endswith("]")):
                raise ConfigError(f"malformed section header {stripped!r}", lineno)
            close()
            name = stripped[len("[scenario ") : -1].strip()
            if not name or " " in name:
                raise ConfigError(f"bad scenario name {name!r}", lineno)
            if name in seen:
                raise ConfigError(f"duplicate scenario name {name!r}", lineno)
            seen.add(name)
            kind, seed, raw, open_line = None, 0, {}, lineno
            continue
        if "=" not in stripped:
            raise ConfigError(f"expected 'key = value', got {stripped!r}", lineno)
        if name is None:
            raise ConfigError("key outside any [scenario ...] section", lineno)
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key == "kind":
            if kind is not None:
                raise ConfigError(f"duplicate key 'kind'", lineno)
            if value not in KINDS:
                raise ConfigError(f"unknown kind {value!r}", lineno)
            kind = value
        elif key == "seed":
            try:
                seed = _int(value)
            except ValueError:
                raise ConfigError(f"bad seed {value!r}", lineno)
            if not (0 <= seed < 2**64):
                raise ConfigError(f"seed must fit in 64 bits, got {value}", lineno)
        else:
            if key in raw:
                raise ConfigError(f"duplicate key {key!r}", lineno)
            raw[key] = (value, lineno)
    close()
    return scenarios
