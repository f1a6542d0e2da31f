"""INI-style run configuration.

Frequencies are written in ordinary Hz (keys ending in ``_hz``) and are
multiplied by ``2 pi`` when the scenario is built, so the document itself
round-trips unchanged. Unknown sections or keys are rejected.
"""

import configparser
import io
import math
from pathlib import Path

from . import fields
from .atomic import RB87_D1_GAMMA_R, RB87_D1_WAVELENGTH, AtomicParams
from .exceptions import ConfigError
from .fields import make_grid
from .propagation import PropagationConfig
from .sweep import ProbeSpec, Scenario

TWO_PI = 2 * math.pi

# section -> key -> (type, default); default None means "optional, unset".
SCHEMA = {
    "atom": {
        "lambda_m": (float, RB87_D1_WAVELENGTH),
        "density_m3": (float, 1e18),
        "gamma_r_hz": (float, RB87_D1_GAMMA_R / TWO_PI),
        "gamma_hz": (float, None),
        "gamma_cb_hz": (float, 1e3),
        "detuning_hz": (float, 0.0),
    },
    "drive": {
        "pattern": (str, "interference"),
        "omega0_hz": (float, None),
        "fringe_period_m": (float, None),
        "L_m": (float, None),
        "x0_m": (float, 0.0),
        "file": (str, None),
    },
    "probe": {
        "shape": (str, "gaussian"),
        "amplitude_hz": (float, 1e4),
        "waist_m": (float, 0.7e-3),
        "center_m": (float, 0.0),
        "lens_focal_m": (float, None),
        "lens_distance_m": (float, None),
    },
    "grid": {
        "n": (int, 4096),
        "width_m": (float, None),
    },
    "cell": {
        "length_m": (float, 0.04),
        "dz_m": (float, None),
    },
    "solver": {
        "kind": (str, "splitstep"),
        "boundary": (str, "periodic"),
        "pad_fraction": (float, None),
    },
    "output": {
        "dir": (str, "out"),
        "snapshots_every": (int, 0),
    },
    "analysis": {
        "observable": (str, "intensity"),
        "min_prominence": (float, 0.2),
    },
}

DRIVE_PATTERNS = ("interference", "parabolic_max", "parabolic_null", "file")
DEFAULT_PAD_FRACTION = 0.1


def _parser():
    parser = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#", ";"), default_section="__none__"
    )
    parser.optionxform = str
    return parser


def _convert(section, key, text):
    kind = SCHEMA[section][key][0]
    try:
        if kind is int:
            return int(text)
        if kind is float:
            value = float(text)
            if not math.isfinite(value):
                raise ValueError("not finite")
            return value
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {text!r}: expected {kind.__name__}") from exc
    return text.strip()


class RunConfig:
    """Validated configuration values exactly as written (Hz, metres).

    Missing keys fall back to :data:`SCHEMA` defaults through :meth:`get`.
    """

    def __init__(self, values=None, base_dir="."):
        self.values = {}
        self.base_dir = Path(base_dir)
        for section, entries in (values or {}).items():
            if section not in SCHEMA:
                raise ConfigError(f"unknown section [{section}]")
            for key, value in entries.items():
                if key not in SCHEMA[section]:
                    raise ConfigError(f"unknown key {key!r} in section [{section}]")
                if isinstance(value, str):
                    value = _convert(section, key, value)
                self.values.setdefault(section, {})[key] = value

    @classmethod
    def loads(cls, text, base_dir="."):
        parser = _parser()
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse configuration: {exc}") from exc
        return cls({s: dict(parser[s]) for s in parser.sections()}, base_dir)

    @classmethod
    def load(cls, path):
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc}") from exc
        return cls.loads(text, base_dir=path.parent)

    def dumps(self):
        parser = _parser()
        for section, entries in self.values.items():
            parser[section] = {k: repr(v) if isinstance(v, float) else str(v)
                               for k, v in entries.items()}
        buf = io.StringIO()
        parser.write(buf)
        return buf.getvalue()

    def get(self, section, key):
        return self.values.get(section, {}).get(key, SCHEMA[section][key][1])

    def set(self, section, key, value):
        RunConfig({section: {key: value}})
        self.values.setdefault(section, {})[key] = value

    def __eq__(self, other):
        return isinstance(other, RunConfig) and self.values == other.values

    # Scenario construction -------------------------------------------------

    def atomic_params(self):
        gamma_hz = self.get("atom", "gamma_hz")
        try:
            return AtomicParams(
                wavelength=self.get("atom", "lambda_m"),
                density=self.get("atom", "density_m3"),
                gamma_r=TWO_PI * self.get("atom", "gamma_r_hz"),
                gamma=None if gamma_hz is None else TWO_PI * gamma_hz,
                gamma_cb=TWO_PI * self.get("atom", "gamma_cb_hz"),
                detuning=TWO_PI * self.get("atom", "detuning_hz"),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"[atom] {exc}") from exc

    def _require(self, section, key):
        value = self.get(section, key)
        if value is None:
            raise ConfigError(f"[{section}] {key} is required for this configuration")
        return value

    def drive_descriptor(self):
        pattern = self.get("drive", "pattern")
        if pattern not in DRIVE_PATTERNS:
            raise ConfigError(f"[drive] pattern must be one of {DRIVE_PATTERNS}, got {pattern!r}")
        if pattern == "file":
            path = Path(self._require("drive", "file"))
            if not path.is_absolute():
                path = self.base_dir / path
            return fields.FromFile(str(path))
        omega0 = TWO_PI * self._require("drive", "omega0_hz")
        x0 = self.get("drive", "x0_m")
        if pattern == "interference":
            return fields.Interference(omega0, self._require("drive", "fringe_period_m"), x0)
        L = self._require("drive", "L_m")
        if pattern == "parabolic_max":
            return fields.ParabolicMax(omega0, L, x0)
        return fields.ParabolicNull(omega0, L)

    def probe_spec(self):
        try:
            return ProbeSpec(
                shape=self.get("probe", "shape"),
                amplitude=TWO_PI * self.get("probe", "amplitude_hz"),
                waist=self.get("probe", "waist_m"),
                center=self.get("probe", "center_m"),
                lens_focal=self.get("probe", "lens_focal_m"),
                lens_distance=self.get("probe", "lens_distance_m"),
            )
        except ValueError as exc:
            raise ConfigError(f"[probe] {exc}") from exc

    def default_width(self):
        """Eight times the widest beam feature."""
        features = []
        if self.get("probe", "shape") != "plane":
            features.append(2 * self.get("probe", "waist_m"))
        for key, factor in (("fringe_period_m", 1.0), ("L_m", 2.0)):
            value = self.get("drive", key)
            if value is not None:
                features.append(factor * value)
        if not features:
            raise ConfigError("[grid] width_m is required when no beam feature sets a scale")
        return 8 * max(features)

    def scenario(self):
        """Build the :class:`~darkstate.sweep.Scenario` described by this config."""
        width = self.get("grid", "width_m") or self.default_width()
        boundary = self.get("solver", "boundary")
        pad = self.get("solver", "pad_fraction")
        if pad is None:
            pad = DEFAULT_PAD_FRACTION if boundary == "absorbing" else 0.0
        try:
            grid = make_grid(self.get("grid", "n"), width)
            prop = PropagationConfig(
                cell_length=self.get("cell", "length_m"),
                dz=self.get("cell", "dz_m"),
                solver=self.get("solver", "kind"),
                boundary=boundary,
                pad_fraction=pad,
            )
            return Scenario(
                atom=self.atomic_params(),
                drive=self.drive_descriptor(),
                probe=self.probe_spec(),
                grid=grid,
                propagation=prop,
                observable=self.get("analysis", "observable"),
                min_prominence=self.get("analysis", "min_prominence"),
            )
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
