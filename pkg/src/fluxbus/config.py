"""Flat ``key = value`` run configuration with strict key checking.

Keys are dotted (``params.omega_r``, ``cutoffs.n_photon``). Every key has a
typed default in :data:`SCHEMA`; a file or ``--set`` override naming any
other key is rejected with the key in the message.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Mapping

from .errors import ConfigError
from .hammodels import Cutoffs, HamiltonianKind
from .physpar import CONSTANTS


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _floats(text: str) -> tuple[float, ...]:
    items = [t for t in text.replace(";", ",").split(",") if t.strip()]
    if not items:
        raise ValueError("empty list")
    return tuple(float(t) for t in items)


def _cutoff(text: str) -> int | None:
    if text.strip().lower() == "auto":
        return None
    value = int(text)
    if value < 2:
        raise ValueError("cutoff must be >= 2 or 'auto'")
    return value


def _levels(text: str) -> dict[str, int | str]:
    """``qubit:g, photon:0, spin:1`` -> mapping; integers stay integers."""
    out: dict[str, int | str] = {}
    for item in text.split(","):
        if not item.strip():
            continue
        name, sep, level = item.partition(":")
        if not sep:
            raise ValueError(f"expected name:level, got {item.strip()!r}")
        level = level.strip()
        out[name.strip()] = int(level) if level.lstrip("-").isdigit() else level
    if not out:
        raise ValueError("empty state")
    return out


def _kind(text: str) -> str:
    return HamiltonianKind(text.strip()).value


def _fmt(value: Any) -> str:
    if value is None:
        return "auto"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ", ".join(_fmt(v) for v in value)
    if isinstance(value, dict):
        return ", ".join(f"{k}:{v}" for k, v in value.items())
    return str(value)


# key -> (parser, default). Frequencies under params.* are in units of
# omega_r for the dynamics commands; the coupling calculators use MHz/SI keys.
SCHEMA: dict[str, tuple[Callable[[str], Any], Any]] = {
    "params.omega_q": (float, 2.0),
    "params.omega_r": (float, 1.0),
    "params.omega_s": (float, 1.0),
    "params.g_qr": (float, 0.05),
    "params.g_qs": (float, 0.05),
    "cutoffs.n_photon": (_cutoff, None),
    "cutoffs.n_spinmode": (_cutoff, None),
    "transfer.kind": (_kind, "rabi_full"),
    "transfer.t_max": (float, 4.0),
    "transfer.n_steps": (int, 2001),
    "transfer.initial": (_levels, {"qubit": "g", "photon": 0, "spin": 1}),
    "transfer.target": (_levels, {"qubit": "g", "photon": 1, "spin": 0}),
    "transfer.n_spins": (int, 3),
    "transfer.converge": (_bool, True),
    "transfer.tol": (float, 1e-4),
    "transfer.cap": (int, 40),
    "sweep.workers": (int, 1),
    "fig5.strong_g": (float, 0.05),
    "fig5.strong_omega_q": (float, 2.0),
    "fig5.ultra_g": (float, 1.0),
    "fig5.ultra_omega_q": (float, 9.0),
    "fig6.g_values": (_floats, (0.025, 0.05, 0.1, 0.15, 0.2, 0.3)),
    "fig6.trajectory_g": (_floats, (0.025, 0.15, 0.3)),
    "fig6.omega_q": (float, 2.0),
    "fig4.n_min_exp": (int, 6),
    "fig4.n_max_exp": (int, 13),
    "fig4.points_per_decade": (int, 4),
    "fig4.g_single_hybrid_mhz": (float, CONSTANTS["g_single_hybrid_mhz"]),
    "fig4.g_single_direct_mhz": (float, CONSTANTS["g_single_direct_mhz"]),
    "fig4.g_qr_mhz": (float, 100.0),
    "fig4.delta_mhz": (float, 1000.0),
    "sample.density_per_um3": (float, 3e6),
    "sample.thickness_um": (float, 5.0),
    "sample.persistent_current_na": (float, 900.0),
    "sample.aspect": (float, 50.0),
    "sample.area_um2": (float, 100.0),
    "couplings.detuning_ratio": (float, 3.0),
    "couplings.omega_r_mhz": (float, 5000.0),
    "couplings.inductance_nh": (float, 10.0),
    "couplings.mutual_ph": (float, 4.0),
    "fncheck.n_random": (int, 20),
    "fncheck.seed": (int, 12345),
    "fncheck.n_photon": (int, 6),
    "fncheck.tolerance": (float, 1e-8),
    "oracle.n_spins": (int, 3),
    "oracle.n_photon": (int, 6),
    "oracle.rotating_wave": (_bool, False),
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    config_path: str | None = None
    output_dir: str = "out"
    overrides: tuple[str, ...] = ()
    quiet: bool = False


def _assign(values: dict, key: str, raw: str, where: str):
    key = key.strip()
    if key not in SCHEMA:
        raise ConfigError(f"{where}: unknown config key {key!r}")
    parser, _ = SCHEMA[key]
    try:
        values[key] = parser(raw.strip())
    except ValueError as exc:
        raise ConfigError(f"{where}: bad value for {key!r}: {exc}") from None


def parse_text(text: str, values: dict | None = None, source: str = "<config>") -> dict:
    values = {} if values is None else values
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, raw = line.partition("=")
        if not sep:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        _assign(values, key, raw, f"{source}:{lineno}")
    return values


def resolve(config_path: str | None = None, overrides=()) -> dict[str, Any]:
    """Defaults, then the config file, then ``key=value`` overrides in order."""
    values = {k: default for k, (_, default) in SCHEMA.items()}
    if config_path is not None:
        try:
            text = Path(config_path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {config_path}: {exc}") from None
        parse_text(text, values, config_path)
    for item in overrides:
        key, sep, raw = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        _assign(values, key, raw, "--set")
    return values


def cutoffs_from(values: Mapping[str, Any]) -> Cutoffs | None:
    n_ph, n_sp = values["cutoffs.n_photon"], values["cutoffs.n_spinmode"]
    if n_ph is None and n_sp is None:
        return None
    if n_ph is None or n_sp is None:
        raise ConfigError("set both cutoffs.n_photon and cutoffs.n_spinmode, or neither")
    return Cutoffs(n_ph, n_sp)


def manifest_lines(command: str, values: Mapping[str, Any], extra: Mapping[str, Any] = ()) -> list[str]:
    entries = {f"run.command": command}
    entries.update({k: _fmt(v) for k, v in values.items()})
    entries.update({f"constants.{k}": _fmt(v) for k, v in CONSTANTS.items()})
    entries.update({k: _fmt(v) for k, v in dict(extra).items()})
    return [f"{k} = {entries[k]}" for k in sorted(entries)]
