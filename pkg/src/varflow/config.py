"""JSON scenario and network configuration.

A config file is either a bare network::

    {"vertices": ["s", "a", "d"],
     "links": [{"id": "e1", "u": "s", "v": "a", "p": 0.2, "rtt": 4, "sigma": 1.0}, ...],
     "source": "s", "destination": "d", "default_sigma": 1.0}

or a scenario wrapping one, where ``network`` may also be a generator spec
(``parallel_paths`` with ``n`` or ``parallel_links`` with ``k``, plus ``p``
and ``rtt``) and ``coding``, ``seed``, ``horizon`` and ``sigma`` configure
the simulator.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

from .generators import make_parallel_links_net, make_parallel_paths_net
from .model import LinkSpec, Network, NetworkError

ETA_POLICIES = ("max", "min", "mean", "stable_max", "stable_min")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CodingConfig:
    N: int
    l: int
    delta: int
    n: Optional[int] = None
    eta_policy: Optional[str] = None


@dataclass(frozen=True)
class ScenarioConfig:
    network: Network
    sigma: Optional[float] = None
    coding: Optional[CodingConfig] = None
    seed: Optional[int] = None
    horizon: Optional[int] = None


def _require(d: Dict[str, Any], key: str, where: str):
    if key not in d:
        raise ConfigError(f"{where}: missing key '{key}'")
    return d[key]


def network_from_dict(d: Dict[str, Any], sigma: Optional[float] = None) -> Network:
    if not isinstance(d, dict):
        raise ConfigError("network must be a JSON object")
    has_gen = "generator" in d
    has_explicit = "vertices" in d or "links" in d
    if has_gen == has_explicit:
        raise ConfigError("network needs exactly one of an explicit graph or a generator spec")
    try:
        if has_gen:
            kind = d["generator"]
            p = float(_require(d, "p", "generator"))
            rtt = int(_require(d, "rtt", "generator"))
            s = 1.0 if sigma is None else float(sigma)
            if kind == "parallel_paths":
                return make_parallel_paths_net(int(_require(d, "n", "generator")), p, rtt, s)
            if kind == "parallel_links":
                return make_parallel_links_net(int(_require(d, "k", "generator")), p, rtt, s)
            raise ConfigError(f"unknown generator '{kind}'")
        links = []
        for raw in _require(d, "links", "network"):
            sig = raw.get("sigma")
            links.append(LinkSpec(str(_require(raw, "id", "link")), str(_require(raw, "u", "link")),
                                  str(_require(raw, "v", "link")), float(_require(raw, "p", "link")),
                                  _int(_require(raw, "rtt", "link")),
                                  None if sig is None else float(sig)))
        default_sigma = d.get("default_sigma", 1.0) if sigma is None else sigma
        return Network(tuple(str(v) for v in _require(d, "vertices", "network")), tuple(links),
                       str(_require(d, "source", "network")), str(_require(d, "destination", "network")),
                       float(default_sigma))
    except (NetworkError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def _int(x) -> int:
    if isinstance(x, float) and not x.is_integer():
        raise ConfigError(f"expected an integer, got {x}")
    return int(x)


def network_to_dict(net: Network) -> Dict[str, Any]:
    links = []
    for e in net.links:
        raw = {"id": e.id, "u": e.u, "v": e.v, "p": e.p, "rtt": e.rtt}
        if e.sigma is not None:
            raw["sigma"] = e.sigma
        links.append(raw)
    return {"vertices": list(net.vertices), "links": links, "source": net.source,
            "destination": net.destination, "default_sigma": net.default_sigma}


def scenario_from_dict(d: Dict[str, Any]) -> ScenarioConfig:
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    if "network" not in d:
        return ScenarioConfig(network_from_dict(d))
    sigma = d.get("sigma")
    coding = None
    if "coding" in d:
        c = d["coding"]
        try:
            coding = CodingConfig(N=_int(_require(c, "N", "coding")), l=_int(_require(c, "l", "coding")),
                                  delta=_int(c.get("delta", 0)),
                                  n=None if c.get("n") is None else _int(c["n"]),
                                  eta_policy=c.get("eta_policy"))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"coding: {exc}") from exc
        if (coding.n is None) == (coding.eta_policy is None):
            raise ConfigError("coding needs exactly one of 'n' or 'eta_policy'")
        if coding.eta_policy is not None and coding.eta_policy not in ETA_POLICIES:
            raise ConfigError(f"eta_policy must be one of {', '.join(ETA_POLICIES)}")
    seed = d.get("seed")
    if seed is not None and (not isinstance(seed, int) or seed < 0):
        raise ConfigError("seed must be an unsigned integer")
    horizon = d.get("horizon")
    return ScenarioConfig(network_from_dict(d["network"], sigma), sigma, coding, seed,
                          None if horizon is None else _int(horizon))


def load_scenario(path) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return scenario_from_dict(data)
