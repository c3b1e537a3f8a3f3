"""Run configuration: a flat ``key = value`` file plus command-line overrides.

Recognised keys::

    preset   = iv-sugeno1 | iv-sugeno2 | iv-sugeno3 | sna   (sets f and g)
    order    = xy | lex1 | lex2 | alpha-plus:A | alpha-minus:A | alpha-beta:A,B
    measure  = cardinality | power:P | table:FILE.csv
    n        = arity for family measures (default: input length, or 4)
    f        = meet | sugeno1 | sugeno2 | sna | miv:(i) .. miv:(v)
    g        = max | max-square | max-sqrt | proj1 | mean | capped-sum
    miv_alpha, a1, a2, gamma = parameters of miv presets
    seed, samples, workers, acknowledge_non_wds
    partitions, test_fraction, rescale            (fuse)
    affinity, window                              (network)
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigError, MeasureError
from .functional import F_PRESETS, FUNCTIONAL_PRESETS, G_PRESETS, FGFunctional, FPreset, MivF
from .intervals import AdmissibleOrder
from .measures import IvFuzzyMeasure, cardinality_measure, load_measure_csv, power_measure, validate
from .miv import make_preset


@dataclass(frozen=True)
class RunConfig:
    order: str = "xy"
    measure: str = "cardinality"
    n: int | None = None
    f: str | None = None  # meet unless a preset or command says otherwise
    g: str | None = None  # max likewise
    miv_alpha: float = 0.5
    a1: float = 0.5
    a2: float = 0.5
    gamma: float = 0.0
    seed: int = 0
    samples: int = 1000
    workers: int = 1
    acknowledge_non_wds: bool = False
    partitions: int = 10
    test_fraction: float = 0.5
    rescale: bool = False
    affinity: str = "bf"
    window: int = 10
    base_dir: Path = field(default=Path("."), compare=False)

    def with_overrides(self, **kw) -> RunConfig:
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, raw: str):
    kind = _TYPES[key]
    try:
        if kind in ("int", "int | None"):
            return int(raw)
        if kind == "float":
            return float(raw)
        if kind == "bool":
            low = raw.strip().lower()
            if low not in ("1", "0", "true", "false", "yes", "no", "on", "off"):
                raise ValueError(raw)
            return low in ("1", "true", "yes", "on")
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    return raw.strip()


def parse_config_text(text: str, base_dir: Path = Path(".")) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    try:
        parser.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    values = {}
    for key, raw in parser["run"].items():
        key = key.replace("-", "_")
        if key == "preset":
            continue
        if key not in _TYPES or key == "base_dir":
            raise ConfigError(f"unknown config key {key!r}")
        values[key] = _coerce(key, raw)
    preset = parser["run"].get("preset")
    if preset:
        preset = preset.strip()
        if preset not in FUNCTIONAL_PRESETS:
            raise ConfigError(f"unknown preset {preset!r}")
        f, g = FUNCTIONAL_PRESETS[preset]
        values.setdefault("f", f)
        values.setdefault("g", g)
    return RunConfig(base_dir=base_dir, **values)


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, path.parent)


def preset_values(name: str) -> dict:
    if name not in FUNCTIONAL_PRESETS:
        raise ConfigError(f"unknown preset {name!r}")
    f, g = FUNCTIONAL_PRESETS[name]
    return {"f": f, "g": g}


# -- builders ----------------------------------------------------------------


def _split(text: str) -> tuple[str, list[float]]:
    name, _, arg = text.partition(":")
    try:
        params = [float(p) for p in arg.split(",")] if arg else []
    except ValueError as exc:
        raise ConfigError(f"bad parameters in {text!r}") from exc
    return name.strip().lower(), params


def parse_order(text: str) -> AdmissibleOrder:
    name, params = _split(text)
    try:
        if name in ("xy", "xu-yager") and not params:
            return AdmissibleOrder.xu_yager()
        if name == "lex1" and not params:
            return AdmissibleOrder.lex1()
        if name == "lex2" and not params:
            return AdmissibleOrder.lex2()
        if name == "alpha-plus" and len(params) == 1:
            return AdmissibleOrder.alpha_plus(params[0])
        if name == "alpha-minus" and len(params) == 1:
            return AdmissibleOrder.alpha_minus(params[0])
        if name == "alpha-beta" and len(params) == 2:
            return AdmissibleOrder.alpha_beta(*params)
    except ValueError as exc:
        raise ConfigError(f"invalid order {text!r}: {exc}") from exc
    raise ConfigError(f"unknown order {text!r}")


def parse_measure(text: str, n: int | None, base_dir: Path = Path(".")) -> IvFuzzyMeasure:
    name, _, arg = text.partition(":")
    name = name.strip().lower()
    if name == "table":
        path = Path(arg.strip())
        if not path.is_absolute():
            path = base_dir / path
        try:
            m = load_measure_csv(path)
        except OSError as exc:
            raise ConfigError(f"cannot read measure table {path}: {exc}") from exc
        except (MeasureError, ValueError) as exc:
            raise ConfigError(f"bad measure table {path}: {exc}") from exc
        if n is not None and m.n != n:
            raise ConfigError(f"measure table has n = {m.n}, input needs {n}")
        return m
    if n is None or n < 1:
        raise ConfigError("family measures need a positive arity n")
    if name == "cardinality" and not arg:
        return cardinality_measure(n)
    if name == "power":
        _, params = _split(text)
        if len(params) != 1 or params[0] <= 0:
            raise ConfigError(f"power measure needs one positive exponent, got {text!r}")
        return power_measure(n, params[0])
    raise ConfigError(f"unknown measure {text!r}")


def make_f(cfg: RunConfig) -> FPreset:
    name = (cfg.f or "meet").strip().lower()
    if name.startswith("miv:"):
        try:
            preset = make_preset(name[4:].strip(), alpha=cfg.miv_alpha, a1=cfg.a1, a2=cfg.a2, gamma=cfg.gamma)
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"invalid miv preset {cfg.f!r}: {exc}") from exc
        return MivF(preset.spec, preset.name)
    if name not in F_PRESETS:
        raise ConfigError(f"unknown F preset {cfg.f!r}")
    return F_PRESETS[name]()


def make_g(cfg: RunConfig):
    name = (cfg.g or "max").strip().lower()
    if name not in G_PRESETS:
        raise ConfigError(f"unknown G preset {cfg.g!r}")
    return G_PRESETS[name]()


def build_functional(cfg: RunConfig, n: int | None = None, measure: IvFuzzyMeasure | None = None) -> FGFunctional:
    """Validated functional; raises WDSViolation for ill-defined triples."""
    order = parse_order(cfg.order)
    if measure is None:
        measure = parse_measure(cfg.measure, n if n is not None else cfg.n, cfg.base_dir)
    check = validate(measure, order)
    if not check:
        raise ConfigError(f"invalid fuzzy measure: {check.message}")
    return FGFunctional(measure, make_f(cfg), make_g(cfg), order, acknowledge_non_wds=cfg.acknowledge_non_wds)
