"""
Run configuration: a flat INI file whose sections mirror the fields of
:class:`RunConfig`.

    [run]       experiment, seed, save_every
    [grid]      L, N
    [time]      T, dt, stepper, ladder, times
    [equation]  mu, alpha, form, epsilon, dealias, linear
    [class]     m, M, k, lam
    [data]      kind, omega, c, c0, m, file
    [probe]     n_samples, tolerance, tol, max_iter, perturbations, smoothing_k
    [sweep]     omega, c, alpha, T, N   (comma-separated lists)

Unset keys fall back to per-experiment defaults (see ``EXPERIMENT_DEFAULTS``);
the resolved configuration is echoed into every manifest, and a manifest can
be fed back as a config to repeat the run.
"""

from __future__ import annotations

import configparser
import io
import json
from dataclasses import dataclass, replace
from pathlib import Path

from ..errors import ConfigurationError

MU_NAMES = {"auto": "auto", "+1": 1.0, "1": 1.0, "-1": -1.0, "+i": 1j, "i": 1j, "-i": -1j}


def parse_mu(text) -> complex | str:
    """'auto', '+1', '-1', '+i', '-i', or any Python complex literal such as '0.6+0.8j'."""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    if isinstance(text, (list, tuple)) and len(text) == 2:
        return complex(text[0], text[1])
    key = str(text).strip().lower()
    if key in MU_NAMES:
        v = MU_NAMES[key]
        return v if v == "auto" else complex(v)
    try:
        return complex(key.replace(" ", ""))
    except ValueError:
        raise ConfigurationError(f"cannot parse mu={text!r}", "mu")


def format_mu(mu) -> str:
    if mu == "auto":
        return "auto"
    mu = complex(mu)
    return {1: "+1", -1: "-1", 1j: "+i", -1j: "-i"}.get(mu, repr(mu))


def _floats(text) -> tuple:
    if text is None or text == "":
        return ()
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    return tuple(float(v) for v in str(text).split(",") if v.strip())


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    v = str(text).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(text)


def _opt(conv):
    def parse(text):
        if text is None or (isinstance(text, str) and text.strip().lower() in ("", "none", "auto")):
            return None
        return conv(text)

    return parse


# (section, key, attribute, parser)
SCHEMA = [
    ("run", "experiment", "experiment", str),
    ("run", "seed", "seed", int),
    ("run", "save_every", "save_every", _opt(int)),
    ("grid", "L", "L", _opt(float)),
    ("grid", "N", "N", _opt(int)),
    ("time", "T", "T", _opt(float)),
    ("time", "dt", "dt", _opt(float)),
    ("time", "stepper", "stepper", str),
    ("time", "ladder", "ladder", _floats),
    ("time", "times", "times", _floats),
    ("equation", "mu", "mu", parse_mu),
    ("equation", "alpha", "alpha", float),
    ("equation", "form", "form", str),
    ("equation", "epsilon", "epsilon", float),
    ("equation", "dealias", "dealias", _bool),
    ("equation", "linear", "linear", _bool),
    ("class", "m", "m", _opt(int)),
    ("class", "M", "M", int),
    ("class", "k", "k", _opt(int)),
    ("class", "lam", "lam", _opt(float)),
    ("data", "kind", "data_kind", _opt(str)),
    ("data", "omega", "omega", float),
    ("data", "c", "c", float),
    ("data", "c0", "c0", float),
    ("data", "m", "data_m", _opt(int)),
    ("data", "file", "data_file", _opt(str)),
    ("probe", "n_samples", "n_samples", _opt(int)),
    ("probe", "tolerance", "tolerance", _opt(float)),
    ("probe", "tol", "picard_tol", float),
    ("probe", "max_iter", "max_iter", int),
    ("probe", "perturbations", "perturbations", _floats),
    ("probe", "smoothing_k", "smoothing_k", _opt(int)),
    ("sweep", "omega", "sweep_omega", _floats),
    ("sweep", "c", "sweep_c", _floats),
    ("sweep", "alpha", "sweep_alpha", _floats),
    ("sweep", "T", "sweep_T", _floats),
    ("sweep", "N", "sweep_N", _floats),
]

SWEEP_AXES = {"omega": "sweep_omega", "c": "sweep_c", "alpha": "sweep_alpha", "T": "sweep_T", "N": "sweep_N"}
STEPPERS = ("ifrk4", "strang")


@dataclass(frozen=True)
class RunConfig:
    experiment: str = "soliton_propagation"
    seed: int = 0
    save_every: int | None = None
    L: float | None = None
    N: int | None = None
    T: float | None = None
    dt: float | None = None
    stepper: str = "ifrk4"
    ladder: tuple = ()
    times: tuple = ()
    mu: complex | str = "auto"
    alpha: float = 1.0
    form: str = "gdnls"
    epsilon: float = 0.0
    dealias: bool = False
    linear: bool = False
    m: int | None = None
    M: int = 2
    k: int | None = None
    lam: float | None = None
    data_kind: str | None = None
    omega: float = 1.0
    c: float = 1.0
    c0: float = 0.5
    data_m: int | None = None
    data_file: str | None = None
    n_samples: int | None = None
    tolerance: float | None = None
    picard_tol: float = 1e-13
    max_iter: int = 30
    perturbations: tuple = ()
    smoothing_k: int | None = None
    sweep_omega: tuple = ()
    sweep_c: tuple = ()
    sweep_alpha: tuple = ()
    sweep_T: tuple = ()
    sweep_N: tuple = ()

    def __post_init__(self):
        if self.stepper not in STEPPERS:
            raise ConfigurationError(f"stepper must be one of {STEPPERS}, got {self.stepper!r}", "stepper")
        if self.form not in ("gdnls", "divergence"):
            raise ConfigurationError(f"form must be 'gdnls' or 'divergence', got {self.form!r}", "form")
        if self.data_kind not in (None, "solitary", "decay", "file"):
            raise ConfigurationError(f"data kind must be solitary, decay or file, got {self.data_kind!r}", "kind")
        if self.data_kind == "file" and not self.data_file:
            raise ConfigurationError("data kind 'file' needs [data] file", "file")
        if self.mu != "auto":
            object.__setattr__(self, "mu", complex(self.mu))
        for name in ("ladder", "times", "perturbations", *SWEEP_AXES.values()):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))

    def updated(self, **changes) -> "RunConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        """JSON-ready echo; every field is present so the run can be repeated."""
        out = {}
        for section, key, attr, _ in SCHEMA:
            v = getattr(self, attr)
            if attr == "mu":
                v = format_mu(v)
            elif isinstance(v, tuple):
                v = list(v)
            out.setdefault(section, {})[key] = v
        return out

    def to_ini(self) -> str:
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str
        for section, values in self.to_dict().items():
            cp[section] = {
                k: "" if v is None else ", ".join(repr(x) for x in v) if isinstance(v, list) else str(v)
                for k, v in values.items()
            }
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()


_LOOKUP = {(s, k): (a, conv) for s, k, a, conv in SCHEMA}


def config_from_sections(sections: dict, base: RunConfig | None = None) -> RunConfig:
    """Build a RunConfig from {section: {key: value}}; unknown keys are errors."""
    changes = {}
    for section, values in sections.items():
        if section.upper() == "DEFAULT":
            continue
        for key, raw in values.items():
            hit = _LOOKUP.get((section, key))
            if hit is None:
                raise ConfigurationError(f"unknown config key [{section}] {key}", f"{section}.{key}")
            attr, conv = hit
            try:
                changes[attr] = conv(raw)
            except (TypeError, ValueError) as exc:
                if isinstance(exc, ConfigurationError):
                    raise
                raise ConfigurationError(f"bad value for [{section}] {key}: {raw!r}", f"{section}.{key}")
    return replace(base or RunConfig(), **changes)


def load_config(path: str | Path) -> RunConfig:
    """Read an INI config, or the ``config`` block of a manifest.json."""
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"config file {path} does not exist", "config")
    if path.suffix == ".json":
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid JSON ({exc})", "config")
        return config_from_sections(data.get("config", data))
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(path.read_text())
    except configparser.Error as exc:
        raise ConfigurationError(f"{path}: {exc}", "config")
    return config_from_sections({s: dict(cp[s]) for s in cp.sections()})


def apply_overrides(cfg: RunConfig, pairs) -> RunConfig:
    """Apply 'section.key=value' strings."""
    sections: dict = {}
    for pair in pairs or ():
        if "=" not in pair or "." not in pair.split("=", 1)[0]:
            raise ConfigurationError(f"override must look like section.key=value, got {pair!r}", "set")
        lhs, value = pair.split("=", 1)
        section, key = lhs.split(".", 1)
        sections.setdefault(section.strip(), {})[key.strip()] = value.strip()
    return config_from_sections(sections, cfg)


__all__ = ["RunConfig", "apply_overrides", "config_from_sections", "format_mu", "load_config", "parse_mu"]
