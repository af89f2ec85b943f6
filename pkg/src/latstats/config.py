"""Flat INI-style run configuration: parsing, validation, canonical hashing.

A config is UTF-8 text with flat sections.  Unknown sections or keys are
rejected, duplicate keys are reported by name, and validation returns every
error at once rather than stopping at the first.  Regime issues that the
drivers merely warn about (for example running the decay comparison at
d < 3) surface as non-fatal notes.

Sections and keys:

  [run]           experiment (free-measure | random-measure | compare |
                  martingale | weak-coupling | lemma2 | positivity | dos |
                  conjecture), threads
  [model]         d, L (integer or comma list), E, K
  [profile]       kind (decaying | constant), amplitude, epsilon, eta
  [law]           kind (uniform-sym | uniform01 | bernoulli | gaussian),
                  halfwidth, p, sigma
  [test_function] kind (bump | raised-cosine2 | plateau), center, K, delta,
                  height
  [scale]         a, etas (comma list)
  [seeds]         master, count
  [method]        kind (dense | counting), grid_nodes, dense_cap, inertia
  [output]        prefix
  [martingale]    epsilon, L_max
  [positivity]    delta
  [lemma2]        gammas (comma list), i_Ls (comma list)
  [dos]           r, grid_size
  [conjecture]    theta_order, Ls (comma list)
"""

from __future__ import annotations

import configparser
import hashlib
import io
from dataclasses import dataclass, field

from .lattice import (
    BernoulliSign,
    ConstantProfile,
    DecayingProfile,
    GaussianLaw,
    UniformSymmetric,
    UniformUnit,
)
from .experiments import PowerScale
from .testfunctions import Bump, Plateau, RaisedCosine2

__all__ = ["ConfigError", "RunConfig", "parse_config"]

EXPERIMENTS = (
    "free-measure",
    "random-measure",
    "compare",
    "martingale",
    "weak-coupling",
    "lemma2",
    "positivity",
    "dos",
    "conjecture",
)

_SCHEMA = {
    "run": {"experiment": "str", "threads": "int"},
    "model": {"d": "int", "L": "intlist", "E": "float", "K": "float"},
    "profile": {"kind": "str", "amplitude": "float", "epsilon": "float", "eta": "float"},
    "law": {"kind": "str", "halfwidth": "float", "p": "float", "sigma": "float"},
    "test_function": {
        "kind": "str",
        "center": "float",
        "K": "float",
        "delta": "float",
        "height": "float",
    },
    "scale": {"a": "float", "etas": "floatlist"},
    "seeds": {"master": "int", "count": "int"},
    "method": {"kind": "str", "grid_nodes": "int", "dense_cap": "int", "inertia": "str"},
    "output": {"prefix": "str"},
    "martingale": {"epsilon": "float", "L_max": "int"},
    "positivity": {"delta": "float"},
    "lemma2": {"gammas": "floatlist", "i_Ls": "intlist"},
    "dos": {"r": "int", "grid_size": "int"},
    "conjecture": {"theta_order": "int", "Ls": "intlist"},
}

_REQUIRED = {
    "free-measure": ["model.d", "model.L", "model.E", "model.K"],
    "random-measure": [
        "model.d",
        "model.L",
        "model.E",
        "model.K",
        "profile.kind",
        "law.kind",
        "seeds.master",
    ],
    "compare": ["model.d", "model.L", "model.E", "profile.kind", "law.kind",
                "test_function.kind", "seeds.master"],
    "martingale": ["model.d", "martingale.epsilon", "martingale.L_max", "law.kind",
                   "seeds.master"],
    "weak-coupling": ["model.d", "model.E", "scale.a", "scale.etas", "law.kind",
                      "test_function.kind", "seeds.master"],
    "lemma2": ["model.d", "model.E", "model.K", "model.L", "test_function.kind"],
    "positivity": ["model.d", "model.E", "model.K", "model.L", "positivity.delta"],
    "dos": ["dos.r"],
    "conjecture": ["model.d", "model.E", "test_function.kind"],
}


class ConfigError(ValueError):
    """Carries the full list of validation errors."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass
class RunConfig:
    experiment: str
    values: dict  # "section.key" -> parsed value
    warnings: list = field(default_factory=list)
    config_hash: str = ""
    canonical_text: str = ""

    def get(self, path, default=None):
        return self.values.get(path, default)

    @property
    def threads(self) -> int:
        return int(self.values.get("run.threads", 1))

    @property
    def prefix(self) -> str:
        return self.values.get("output.prefix", self.experiment)

    def ls(self):
        v = self.values.get("model.L")
        return None if v is None else list(v)

    def profile(self):
        kind = self.values.get("profile.kind")
        if kind == "decaying":
            return DecayingProfile(
                amplitude=self.values.get("profile.amplitude", 1.0),
                epsilon=self.values.get("profile.epsilon", 0.5),
            )
        if kind == "constant":
            return ConstantProfile(eta=self.values.get("profile.eta", 1.0))
        raise ConfigError([f"unknown profile kind {kind!r}"])

    def law(self):
        kind = self.values.get("law.kind")
        if kind == "uniform-sym":
            return UniformSymmetric(halfwidth=self.values.get("law.halfwidth", 1.0))
        if kind == "uniform01":
            return UniformUnit()
        if kind == "bernoulli":
            return BernoulliSign(p=self.values.get("law.p", 0.5))
        if kind == "gaussian":
            return GaussianLaw(sigma=self.values.get("law.sigma", 1.0))
        raise ConfigError([f"unknown law kind {kind!r}"])

    def test_function(self):
        kind = self.values.get("test_function.kind")
        k = self.values.get("test_function.K", 1.0)
        height = self.values.get("test_function.height", 1.0)
        center = self.values.get("test_function.center", 0.0)
        if kind == "bump":
            return Bump(center=center, K=k, height=height)
        if kind == "raised-cosine2":
            return RaisedCosine2(K=k, height=height, center=center)
        if kind == "plateau":
            return Plateau(K=k, delta=self.values.get("test_function.delta", 0.5),
                           height=height, center=center)
        raise ConfigError([f"unknown test function kind {kind!r}"])

    def scale(self) -> PowerScale:
        return PowerScale(a=self.values.get("scale.a", 1.0 / 3.0))

    def seeds(self):
        master = int(self.values.get("seeds.master", 0))
        count = int(self.values.get("seeds.count", 1))
        return [master + i for i in range(count)]


def _parse_scalar(kind, raw, path, errors):
    raw = raw.strip()
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        if kind == "intlist":
            return tuple(int(p.strip()) for p in raw.split(",") if p.strip())
        if kind == "floatlist":
            return tuple(float(p.strip()) for p in raw.split(",") if p.strip())
        return raw
    except ValueError:
        errors.append(f"{path}: cannot parse {raw!r} as {kind}")
        return None


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate; raises ConfigError listing every problem."""
    parser = configparser.ConfigParser(strict=True, interpolation=None)
    parser.optionxform = str  # keys are case-sensitive
    errors = []
    try:
        parser.read_file(io.StringIO(text))
    except configparser.DuplicateOptionError as exc:
        raise ConfigError([f"duplicate key '{exc.option}' in section [{exc.section}]"]) from exc
    except configparser.DuplicateSectionError as exc:
        raise ConfigError([f"duplicate section [{exc.section}]"]) from exc
    except configparser.Error as exc:
        raise ConfigError([f"malformed config: {exc}"]) from exc

    values = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            errors.append(f"unknown section [{section}]")
            continue
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                errors.append(f"unknown key '{key}' in section [{section}]")
                continue
            path = f"{section}.{key}"
            val = _parse_scalar(_SCHEMA[section][key], raw, path, errors)
            if val is not None:
                values[path] = val

    experiment = values.get("run.experiment")
    if experiment is None:
        errors.append("run.experiment is required")
    elif experiment not in EXPERIMENTS:
        errors.append(
            f"run.experiment must be one of {', '.join(EXPERIMENTS)}; got {experiment!r}"
        )

    if experiment in _REQUIRED:
        for need in _REQUIRED[experiment]:
            if need not in values:
                errors.append(f"{need} is required for experiment {experiment}")

    # L given as a single int is fine everywhere; normalize to a tuple
    if isinstance(values.get("model.L"), int):
        values["model.L"] = (values["model.L"],)

    d = values.get("model.d")
    e = values.get("model.E")
    if d is not None:
        if d < 1:
            errors.append("model.d must be >= 1")
        elif e is not None and abs(e) > 2 * d:
            errors.append(f"model.E outside [-2d, 2d]: E={e}, d={d}")
    if "model.L" in values and any(l < 1 for l in values["model.L"]):
        errors.append("model.L entries must be >= 1")
    if "model.K" in values and values["model.K"] <= 0:
        errors.append("model.K must be positive")
    if "run.threads" in values and values["run.threads"] < 1:
        errors.append("run.threads must be >= 1")
    if "scale.a" in values and not 0.0 < values["scale.a"] < 0.5:
        errors.append("scale.a must lie in (0, 1/2)")
    if "seeds.count" in values and values["seeds.count"] < 1:
        errors.append("seeds.count must be >= 1")

    if errors:
        raise ConfigError(errors)

    notes = []
    if experiment == "compare" and d is not None and d < 3:
        notes.append(f"note: compare at d={d} is outside the d >= 3 decay regime")
    if experiment in ("lemma2", "positivity") and d is not None and e is not None:
        if not (2 * d - 2 < abs(e) < 2 * d):
            notes.append(f"note: E={e} is outside the band-edge regime 2d-2 < |E| < 2d")
    if experiment == "conjecture" and d is not None and d < 4:
        notes.append(f"note: the limit formula is proposed for d >= 4; d={d}")

    canonical = "\n".join(f"{k}={values[k]}" for k in sorted(values)) + "\n"
    digest = hashlib.sha256(canonical.encode("utf-8")).hexdigest()
    return RunConfig(
        experiment=experiment,
        values=values,
        warnings=notes,
        config_hash=digest,
        canonical_text=text,
    )
