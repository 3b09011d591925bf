"""Synthetic multi-agent scene generation.

Scenes are sampled on a rectangular world centered at the origin. Each agent
carries a class-typed footprint and one of three motion models, all integrated
in closed form so the ground truth has no solver error. The ego vehicle is an
agent too, but it is the observer: it never appears in its own detections.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Sequence

import numpy as np

from .geometry import OrientedBox, Pose2, covered_length, angular_interval, wrap_angle
from .seeding import rng_for


class AgentClass(Enum):
    VEHICLE = "vehicle"
    PEDESTRIAN = "pedestrian"
    CYCLIST = "cyclist"


#: default footprint (length, width) in meters per class
DEFAULT_DIMS: dict[AgentClass, tuple[float, float]] = {
    AgentClass.VEHICLE: (4.5, 1.9),
    AgentClass.PEDESTRIAN: (0.6, 0.6),
    AgentClass.CYCLIST: (1.8, 0.6),
}

#: spawn speed ranges (m/s) per class
SPEED_RANGES: dict[AgentClass, tuple[float, float]] = {
    AgentClass.VEHICLE: (3.0, 11.0),
    AgentClass.PEDESTRIAN: (0.6, 1.8),
    AgentClass.CYCLIST: (1.5, 5.0),
}


# --- motion models ---------------------------------------------------------


@dataclass(frozen=True)
class ConstantVelocity:
    pass


@dataclass(frozen=True)
class ConstantTurnRate:
    omega: float  # rad/s

    def __post_init__(self):
        if abs(self.omega) > 1.0:
            raise ValueError(f"turn rate must satisfy |omega| <= 1 rad/s, got {self.omega}")


@dataclass(frozen=True)
class Waypoints:
    targets: tuple[tuple[float, float], ...]
    speed: float

    def __post_init__(self):
        if self.speed < 0:
            raise ValueError("waypoint speed must be >= 0")
        if not self.targets:
            raise ValueError("waypoint model needs at least one target")


MotionModel = ConstantVelocity | ConstantTurnRate | Waypoints


@dataclass(frozen=True)
class KinematicState:
    """Minimal kinematic state: position, heading, scalar speed along heading."""

    x: float
    y: float
    yaw: float
    speed: float
    waypoint_index: int = 0

    def __post_init__(self):
        if self.speed < 0:
            raise ValueError("speed must be >= 0")
        object.__setattr__(self, "yaw", wrap_angle(float(self.yaw)))

    @property
    def velocity(self) -> np.ndarray:
        return np.array([self.speed * math.cos(self.yaw), self.speed * math.sin(self.yaw)])

    @staticmethod
    def from_velocity(x: float, y: float, vx: float, vy: float) -> "KinematicState":
        return KinematicState(x, y, math.atan2(vy, vx), math.hypot(vx, vy))


_OMEGA_EPS = 1e-12


def step_agent(state: KinematicState, model: MotionModel, dt: float) -> KinematicState:
    """Advance one kinematic state by dt using the exact closed-form update."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if isinstance(model, ConstantVelocity):
        return KinematicState(
            state.x + state.speed * math.cos(state.yaw) * dt,
            state.y + state.speed * math.sin(state.yaw) * dt,
            state.yaw,
            state.speed,
            state.waypoint_index,
        )
    if isinstance(model, ConstantTurnRate):
        w = model.omega
        if abs(w) < _OMEGA_EPS:
            return step_agent(state, ConstantVelocity(), dt)
        th0, th1 = state.yaw, state.yaw + w * dt
        r = state.speed / w
        return KinematicState(
            state.x + r * (math.sin(th1) - math.sin(th0)),
            state.y - r * (math.cos(th1) - math.cos(th0)),
            th1,
            state.speed,
            state.waypoint_index,
        )
    if isinstance(model, Waypoints):
        return _step_waypoints(state, model, dt)
    raise TypeError(f"unknown motion model {model!r}")


def _step_waypoints(state: KinematicState, model: Waypoints, dt: float) -> KinematicState:
    # piecewise-linear travel along remaining legs, exact across waypoint switches
    budget = model.speed * dt
    x, y = state.x, state.y
    yaw = state.yaw
    idx = state.waypoint_index
    while budget > 0 and idx < len(model.targets):
        tx, ty = model.targets[idx]
        dist = math.hypot(tx - x, ty - y)
        if dist < 1e-9:
            idx += 1
            continue
        yaw = math.atan2(ty - y, tx - x)
        if dist > budget:
            x += budget * math.cos(yaw)
            y += budget * math.sin(yaw)
            budget = 0.0
        else:
            x, y = tx, ty
            budget -= dist
            idx += 1
    if budget > 0:
        # past the last target: continue straight
        x += budget * math.cos(yaw)
        y += budget * math.sin(yaw)
    return KinematicState(x, y, yaw, model.speed, idx)


# --- scenario configuration -------------------------------------------------


@dataclass(frozen=True)
class AgentSpec:
    """Explicit agent to place in the scene (overrides random spawning)."""

    cls: AgentClass
    state: KinematicState
    model: MotionModel
    dims: Optional[tuple[float, float]] = None


@dataclass(frozen=True)
class ScenarioConfig:
    duration: float  # seconds
    frame_rate: float = 2.0  # Hz
    n_agents: Mapping[AgentClass, int] = field(
        default_factory=lambda: {AgentClass.VEHICLE: 4, AgentClass.PEDESTRIAN: 1, AgentClass.CYCLIST: 1}
    )
    extent: tuple[float, float] = (100.0, 70.0)  # world spans [-ex/2, ex/2] x [-ey/2, ey/2]
    ego_model: MotionModel = ConstantVelocity()
    ego_start: KinematicState = KinematicState(-30.0, 0.0, 0.0, 4.0)
    seed: int = 0
    agents: Sequence[AgentSpec] = ()  # explicit agents; sampled ones are added on top
    turn_fraction: float = 0.35  # probability a sampled vehicle/cyclist turns (CTRV)
    spawn_clearance: float = 2.0

    def __post_init__(self):
        if self.frame_rate <= 0:
            raise ValueError("frame_rate must be positive")
        if self.duration < 6.5:
            raise ValueError("duration must be >= 6.5 s (one observation + prediction window)")

    @property
    def dt(self) -> float:
        return 1.0 / self.frame_rate

    @property
    def n_frames(self) -> int:
        return int(round(self.duration * self.frame_rate)) + 1


@dataclass(frozen=True)
class AgentTruth:
    agent_id: int
    cls: AgentClass
    box: OrientedBox
    velocity: np.ndarray  # (2,) m/s


@dataclass(frozen=True)
class SceneFrame:
    index: int
    ego: Pose2
    agents: tuple[AgentTruth, ...]


@dataclass(frozen=True)
class GroundTruthLog:
    config: ScenarioConfig
    frames: tuple[SceneFrame, ...]
    scene_id: str = "scene"

    @property
    def frame_rate(self) -> float:
        return self.config.frame_rate

    def agent_history(self, agent_id: int) -> dict[int, AgentTruth]:
        return {
            f.index: a for f in self.frames for a in f.agents if a.agent_id == agent_id
        }

    def agent_ids(self) -> list[int]:
        seen: dict[int, None] = {}
        for f in self.frames:
            for a in f.agents:
                seen.setdefault(a.agent_id, None)
        return list(seen)


class SpawnError(RuntimeError):
    """Raised when collision-free spawning fails after bounded retries."""


def _in_extent(x: float, y: float, extent: tuple[float, float]) -> bool:
    return abs(x) <= extent[0] / 2 and abs(y) <= extent[1] / 2


def _sample_model(cls: AgentClass, rng: np.random.Generator, turn_fraction: float) -> MotionModel:
    if cls is AgentClass.PEDESTRIAN or rng.random() >= turn_fraction:
        return ConstantVelocity()
    return ConstantTurnRate(float(rng.uniform(-0.25, 0.25)))


def _spawn_agents(cfg: ScenarioConfig, rng: np.random.Generator) -> list[tuple[AgentClass, KinematicState, MotionModel, tuple[float, float]]]:
    placed: list[tuple[AgentClass, KinematicState, MotionModel, tuple[float, float]]] = []
    for spec in cfg.agents:
        dims = spec.dims or DEFAULT_DIMS[spec.cls]
        placed.append((spec.cls, spec.state, spec.model, dims))

    ex, ey = cfg.extent
    occupied = [(cfg.ego_start.x, cfg.ego_start.y, DEFAULT_DIMS[AgentClass.VEHICLE])]
    occupied += [(s.x, s.y, d) for _, s, _, d in placed]

    for cls in (AgentClass.VEHICLE, AgentClass.PEDESTRIAN, AgentClass.CYCLIST):
        count = dict(cfg.n_agents).get(cls, 0)
        dims = DEFAULT_DIMS[cls]
        half_diag = 0.5 * math.hypot(*dims)
        for _ in range(count):
            for _attempt in range(200):
                x = rng.uniform(-ex / 2 + 3, ex / 2 - 3)
                y = rng.uniform(-ey / 2 + 3, ey / 2 - 3)
                ok = True
                for ox, oy, od in occupied:
                    min_gap = half_diag + 0.5 * math.hypot(*od) + cfg.spawn_clearance
                    if math.hypot(x - ox, y - oy) < min_gap:
                        ok = False
                        break
                if ok:
                    break
            else:
                raise SpawnError(
                    f"could not place a {cls.value} with {cfg.spawn_clearance} m clearance"
                )
            yaw = rng.uniform(-math.pi, math.pi)
            lo, hi = SPEED_RANGES[cls]
            state = KinematicState(x, y, yaw, float(rng.uniform(lo, hi)))
            placed.append((cls, state, _sample_model(cls, rng, cfg.turn_fraction), dims))
            occupied.append((x, y, dims))
    return placed


def simulate(cfg: ScenarioConfig, scene_id: str = "scene") -> GroundTruthLog:
    """Generate one ground-truth log; deterministic in cfg.seed.

    Agents whose center leaves the world extent are dropped permanently, which
    is the source of natural track-termination events downstream.
    """
    rng = rng_for(cfg.seed, "spawn", scene_id)
    roster = _spawn_agents(cfg, rng)

    ego_state = cfg.ego_start
    states: dict[int, KinematicState] = {i: s for i, (_, s, _, _) in enumerate(roster)}
    alive = set(states)
    frames = []
    for k in range(cfg.n_frames):
        if k > 0:
            ego_state = step_agent(ego_state, cfg.ego_model, cfg.dt)
            for i in list(alive):
                cls, _, model, _ = roster[i]
                states[i] = step_agent(states[i], model, cfg.dt)
                if not _in_extent(states[i].x, states[i].y, cfg.extent):
                    alive.discard(i)
        agents = []
        for i in sorted(alive):
            cls, _, _, dims = roster[i]
            s = states[i]
            agents.append(
                AgentTruth(
                    agent_id=i,
                    cls=cls,
                    box=OrientedBox(s.x, s.y, dims[0], dims[1], s.yaw),
                    velocity=s.velocity,
                )
            )
        frames.append(SceneFrame(index=k, ego=Pose2(ego_state.x, ego_state.y, ego_state.yaw), agents=tuple(agents)))
    return GroundTruthLog(config=cfg, frames=tuple(frames), scene_id=scene_id)


def occlusion_fraction(
    ego: Pose2, target: OrientedBox, occluders: Sequence[OrientedBox]
) -> float:
    """Fraction of the target's angular span (seen from ego) hidden by nearer boxes.

    An occluder counts only if its center is strictly nearer to the ego than the
    target's center; the covered fraction is then pure angular-interval algebra.
    """
    view = np.array([ego.x, ego.y])
    t_start, t_width = angular_interval(target, view)
    if t_width <= 0:
        return 0.0
    d_target = math.hypot(target.cx - ego.x, target.cy - ego.y)
    nearer = []
    for occ in occluders:
        if math.hypot(occ.cx - ego.x, occ.cy - ego.y) < d_target:
            nearer.append(angular_interval(occ, view))
    if not nearer:
        return 0.0
    covered = covered_length((t_start, t_width), nearer)
    return min(covered / t_width, 1.0)
