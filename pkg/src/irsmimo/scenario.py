"""Scenario files: flat key-value text describing one simulation setup.

The grammar is deliberately small: one `key = value` pair per line, dotted
key prefixes for sections, `#` comments, SI units spelled in key suffixes
(`_m`, `_hz`, `_rad`, `_w`).  Example::

    wave.wavelength_m = 0.005
    tx.count = 5
    tx.spacing_m = 0.1
    tx.distance_m = 10.0
    tx.azimuth_rad = 3.6651914291880923
    tx.elevation_rad = 0.5235987755982988
    ...
    focusing = reflective
    meta.label = desk check

Unknown keys are rejected so typos fail loudly.  `parse_scenario` reports
the offending line number for both syntax and validation errors.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field, replace

from .geometry import ArrayPose, IrsLayout
from .response import ReflectionConfig, WaveConfig

FOCUSING_MODES = ("reflective", "zero", "explicit")


class ScenarioError(Exception):
    """Raised for malformed or invalid scenario files."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class PowerConfig:
    """Per-antenna transmit power and receiver noise power, both in watts."""

    per_antenna_power: float = 1.0
    noise_power: float = 1.0

    def __post_init__(self) -> None:
        if self.per_antenna_power <= 0.0 or self.noise_power <= 0.0:
            raise ValueError("powers must be > 0")

    @property
    def snr(self) -> float:
        return self.per_antenna_power / self.noise_power


@dataclass(frozen=True)
class Scenario:
    """One complete simulation setup: wave, both arrays, surface, power."""

    wave: WaveConfig
    tx: ArrayPose
    rx: ArrayPose
    irs: IrsLayout
    reflection: ReflectionConfig = ReflectionConfig()
    power: PowerConfig = PowerConfig()
    focusing_mode: str = "reflective"
    focusing_betas: tuple[float, ...] | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.focusing_mode not in FOCUSING_MODES:
            raise ValueError(f"focusing mode must be one of {FOCUSING_MODES}")
        if self.focusing_mode == "explicit":
            if self.focusing_betas is None:
                raise ValueError("explicit focusing requires a beta list")
            if len(self.focusing_betas) != self.irs.n_elements:
                raise ValueError(
                    f"explicit focusing needs {self.irs.n_elements} phases, "
                    f"got {len(self.focusing_betas)}"
                )
        elif self.focusing_betas is not None:
            raise ValueError("beta list is only allowed with focusing = explicit")


_INT_KEYS = {"tx.count", "rx.count", "irs.count_x", "irs.count_y"}

_FLOAT_KEYS = {
    "wave.wavelength_m",
    "wave.carrier_hz",
    "wave.absorption_inv_m",
    "tx.spacing_m",
    "tx.distance_m",
    "tx.azimuth_rad",
    "tx.elevation_rad",
    "tx.orient_azimuth_rad",
    "tx.orient_elevation_rad",
    "rx.spacing_m",
    "rx.distance_m",
    "rx.azimuth_rad",
    "rx.elevation_rad",
    "rx.orient_azimuth_rad",
    "rx.orient_elevation_rad",
    "irs.spacing_x_m",
    "irs.spacing_y_m",
    "irs.element_len_x_m",
    "irs.element_len_y_m",
    "reflection.amplitude",
    "reflection.polarization_rad",
    "power.per_antenna_w",
    "power.noise_w",
}

_REQUIRED = [
    "tx.count",
    "tx.spacing_m",
    "tx.distance_m",
    "tx.azimuth_rad",
    "tx.elevation_rad",
    "rx.count",
    "rx.spacing_m",
    "rx.distance_m",
    "rx.azimuth_rad",
    "rx.elevation_rad",
    "irs.count_x",
    "irs.count_y",
    "irs.spacing_x_m",
    "irs.spacing_y_m",
]


def _parse_lines(text: str) -> tuple[dict, dict]:
    """Split scenario text into {key: raw value} plus {key: line number}."""
    values: dict[str, str] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ScenarioError("expected 'key = value'", lineno)
        key, value = (part.strip() for part in body.split("=", 1))
        if not key:
            raise ScenarioError("empty key", lineno)
        if key in values:
            raise ScenarioError(f"duplicate key '{key}'", lineno)
        if not value:
            raise ScenarioError(f"empty value for '{key}'", lineno)
        values[key] = value
        lines[key] = lineno
    return values, lines


def parse_scenario(path) -> Scenario:
    """Read and validate a scenario file; raise ScenarioError on any problem."""
    with open(path, encoding="utf-8") as fh:
        return parse_scenario_text(fh.read())


def parse_scenario_text(text: str) -> Scenario:
    values, lines = _parse_lines(text)

    def take_float(key: str, default: float | None = None) -> float | None:
        if key not in values:
            return default
        raw = values.pop(key)
        try:
            return float(raw)
        except ValueError:
            raise ScenarioError(f"'{key}' expects a number, got '{raw}'", lines[key]) from None

    def take_int(key: str) -> int | None:
        if key not in values:
            return None
        raw = values.pop(key)
        try:
            val = int(raw)
        except ValueError:
            raise ScenarioError(f"'{key}' expects an integer, got '{raw}'", lines[key]) from None
        return val

    for key in _REQUIRED:
        if key not in values:
            raise ScenarioError(f"missing required key '{key}'")

    wavelength = take_float("wave.wavelength_m")
    carrier = take_float("wave.carrier_hz")
    if (wavelength is None) == (carrier is None):
        key = "wave.carrier_hz" if carrier is not None else "wave.wavelength_m"
        raise ScenarioError(
            "exactly one of wave.wavelength_m / wave.carrier_hz is required",
            lines.get(key),
        )
    absorption = take_float("wave.absorption_inv_m", 0.0)

    def build_pose(side: str) -> ArrayPose:
        count = take_int(f"{side}.count")
        count_line = lines[f"{side}.count"]
        if count is None or count < 1 or count % 2 == 0:
            raise ScenarioError(f"'{side}.count' must be a positive odd integer", count_line)
        kwargs = dict(
            n_antennas=count,
            spacing=take_float(f"{side}.spacing_m"),
            distance=take_float(f"{side}.distance_m"),
            azimuth=take_float(f"{side}.azimuth_rad"),
            elevation=take_float(f"{side}.elevation_rad"),
            orient_azimuth=take_float(f"{side}.orient_azimuth_rad", 0.0),
            orient_elevation=take_float(f"{side}.orient_elevation_rad", math.pi / 2),
        )
        try:
            return ArrayPose(**kwargs)
        except ValueError as exc:
            raise ScenarioError(f"{side} array: {exc}", count_line) from None

    tx = build_pose("tx")
    rx = build_pose("rx")

    irs_line = lines["irs.count_x"]
    qx, qy = take_int("irs.count_x"), take_int("irs.count_y")
    for name, q in (("irs.count_x", qx), ("irs.count_y", qy)):
        if q is None or q < 1 or q % 2 == 0:
            raise ScenarioError(f"'{name}' must be a positive odd integer", lines.get(name))
    sx = take_float("irs.spacing_x_m")
    sy = take_float("irs.spacing_y_m")
    try:
        irs = IrsLayout(
            q_x=qx,
            q_y=qy,
            spacing_x=sx,
            spacing_y=sy,
            re_len_x=take_float("irs.element_len_x_m", sx),
            re_len_y=take_float("irs.element_len_y_m", sy),
        )
    except ValueError as exc:
        raise ScenarioError(f"surface layout: {exc}", irs_line) from None

    try:
        wave = (
            WaveConfig(wavelength, absorption)
            if wavelength is not None
            else WaveConfig.from_carrier(carrier, absorption)
        )
        reflection = ReflectionConfig(
            amplitude=take_float("reflection.amplitude", 1.0),
            polarization=take_float("reflection.polarization_rad", math.pi / 3),
        )
        power = PowerConfig(
            per_antenna_power=take_float("power.per_antenna_w", 1.0),
            noise_power=take_float("power.noise_w", 1.0),
        )
    except ValueError as exc:
        raise ScenarioError(str(exc))

    mode = values.pop("focusing", "reflective")
    if mode not in FOCUSING_MODES:
        raise ScenarioError(
            f"focusing must be one of {FOCUSING_MODES}, got '{mode}'", lines.get("focusing")
        )
    betas = None
    if "focusing.betas_rad" in values:
        raw = values.pop("focusing.betas_rad")
        try:
            betas = tuple(float(tok) for tok in raw.split(","))
        except ValueError:
            raise ScenarioError(
                "'focusing.betas_rad' expects comma-separated numbers",
                lines["focusing.betas_rad"],
            ) from None

    metadata = {}
    for key in sorted(k for k in values if k.startswith("meta.")):
        metadata[key[len("meta.") :]] = values.pop(key)

    if values:
        stray = min(values, key=lambda k: lines[k])
        raise ScenarioError(f"unknown key '{stray}'", lines[stray])

    try:
        return Scenario(
            wave=wave,
            tx=tx,
            rx=rx,
            irs=irs,
            reflection=reflection,
            power=power,
            focusing_mode=mode,
            focusing_betas=betas,
            metadata=metadata,
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None


def _num(value) -> str:
    return repr(float(value))


def serialize_scenario(scn: Scenario) -> str:
    """Canonical text form: sorted keys, exact float round trip via repr."""
    pairs: list[tuple[str, str]] = [
        ("wave.wavelength_m", _num(scn.wave.wavelength)),
        ("wave.absorption_inv_m", _num(scn.wave.absorption)),
        ("reflection.amplitude", _num(scn.reflection.amplitude)),
        ("reflection.polarization_rad", _num(scn.reflection.polarization)),
        ("power.per_antenna_w", _num(scn.power.per_antenna_power)),
        ("power.noise_w", _num(scn.power.noise_power)),
        ("irs.count_x", str(scn.irs.q_x)),
        ("irs.count_y", str(scn.irs.q_y)),
        ("irs.spacing_x_m", _num(scn.irs.spacing_x)),
        ("irs.spacing_y_m", _num(scn.irs.spacing_y)),
        ("irs.element_len_x_m", _num(scn.irs.re_len_x)),
        ("irs.element_len_y_m", _num(scn.irs.re_len_y)),
        ("focusing", scn.focusing_mode),
    ]
    for side, pose in (("tx", scn.tx), ("rx", scn.rx)):
        pairs += [
            (f"{side}.count", str(pose.n_antennas)),
            (f"{side}.spacing_m", _num(pose.spacing)),
            (f"{side}.distance_m", _num(pose.distance)),
            (f"{side}.azimuth_rad", _num(pose.azimuth)),
            (f"{side}.elevation_rad", _num(pose.elevation)),
            (f"{side}.orient_azimuth_rad", _num(pose.orient_azimuth)),
            (f"{side}.orient_elevation_rad", _num(pose.orient_elevation)),
        ]
    if scn.focusing_betas is not None:
        pairs.append(("focusing.betas_rad", ", ".join(_num(b) for b in scn.focusing_betas)))
    for key, value in scn.metadata.items():
        pairs.append((f"meta.{key}", str(value)))
    return "\n".join(f"{key} = {value}" for key, value in sorted(pairs)) + "\n"


def scenario_hash(scn: Scenario) -> str:
    """Stable content hash used to stamp CSV outputs."""
    return hashlib.sha256(serialize_scenario(scn).encode("utf-8")).hexdigest()


def with_tx(scn: Scenario, **changes) -> Scenario:
    return replace(scn, tx=replace(scn.tx, **changes))


def with_rx(scn: Scenario, **changes) -> Scenario:
    return replace(scn, rx=replace(scn.rx, **changes))
