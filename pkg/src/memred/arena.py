"""Game arenas, winning conditions and play semantics.

Plays are handled as lassos ``prefix . cycle^omega``; every condition check in
the package goes through :func:`play_satisfies` or a graph check equivalent
to it.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence, Union


class Player(enum.IntEnum):
    P0 = 0
    P1 = 1

    @property
    def opponent(self) -> "Player":
        return Player(1 - self)


class Polarity(enum.Enum):
    MAX_EVEN = "max-even"
    MIN_EVEN = "min-even"


class GameError(ValueError):
    pass


class DeadVertex(GameError):
    def __init__(self, vertex: int):
        super().__init__(f"vertex {vertex} has no successor")
        self.vertex = vertex


class BadReference(GameError):
    pass


class EmptyCycle(GameError):
    pass


class WrongConditionType(GameError):
    pass


@dataclass(frozen=True)
class Vertex:
    id: int
    owner: Player
    label: str | None = None


@dataclass(frozen=True, eq=False)
class Arena:
    """Finite game graph.

    Stored column-wise (owners, successor tuples, labels) because expanded
    arenas get large; :attr:`vertices` gives the record view.
    """

    owners: tuple[Player, ...]
    succ: tuple[tuple[int, ...], ...]
    labels: tuple[str | None, ...] = ()

    @classmethod
    def from_edges(cls, owners: Sequence[int], edges: Iterable[tuple[int, int]],
                   labels: Sequence[str | None] | None = None) -> "Arena":
        succ: list[list[int]] = [[] for _ in owners]
        for s, d in edges:
            if not 0 <= s < len(owners):
                raise BadReference(f"edge source {s} out of range")
            if d not in succ[s]:
                succ[s].append(d)
        return cls(tuple(Player(o) for o in owners), tuple(tuple(x) for x in succ),
                   tuple(labels) if labels is not None else ())

    def __len__(self) -> int:
        return len(self.owners)

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        return tuple(Vertex(v, self.owners[v], self.label(v)) for v in range(len(self)))

    def label(self, v: int) -> str | None:
        return self.labels[v] if self.labels else None

    def name(self, v: int) -> str:
        lab = self.label(v)
        return lab if lab is not None else str(v)

    @cached_property
    def pred(self) -> tuple[tuple[int, ...], ...]:
        pred: list[list[int]] = [[] for _ in self.owners]
        for v, targets in enumerate(self.succ):
            for w in targets:
                pred[w].append(v)
        return tuple(tuple(p) for p in pred)

    def edges(self):
        for v, targets in enumerate(self.succ):
            for w in targets:
                yield v, w

    @property
    def n_edges(self) -> int:
        return sum(len(t) for t in self.succ)

    def has_edge(self, v: int, w: int) -> bool:
        return w in self.succ[v]


@dataclass(frozen=True)
class RequestResponse:
    pairs: tuple[tuple[frozenset[int], frozenset[int]], ...]


@dataclass(frozen=True)
class Streett:
    pairs: tuple[tuple[frozenset[int], frozenset[int]], ...]


@dataclass(frozen=True)
class Buchi:
    final: frozenset[int]


@dataclass(frozen=True)
class Parity:
    colors: tuple[int, ...]
    polarity: Polarity = Polarity.MAX_EVEN

    @property
    def max_color(self) -> int:
        return max(self.colors, default=0)


Condition = Union[RequestResponse, Streett, Buchi, Parity]


def make_pairs(pairs) -> tuple[tuple[frozenset[int], frozenset[int]], ...]:
    return tuple((frozenset(a), frozenset(b)) for a, b in pairs)


@dataclass(frozen=True, eq=False)
class Game:
    arena: Arena
    condition: Condition
    name: str = field(default="", compare=False)


def validate(game: Game) -> None:
    """Raise a :class:`GameError` subclass unless *game* is well formed."""
    arena = game.arena
    n = len(arena)
    if len(arena.succ) != n:
        raise BadReference("successor table does not match vertex count")
    if arena.labels and len(arena.labels) != n:
        raise BadReference("label table does not match vertex count")
    for v, targets in enumerate(arena.succ):
        if not targets:
            raise DeadVertex(v)
        for w in targets:
            if not 0 <= w < n:
                raise BadReference(f"edge {v}->{w} leaves the arena")

    def check(vs, what):
        for v in vs:
            if not (isinstance(v, int) and 0 <= v < n):
                raise BadReference(f"{what} references vertex {v}")

    cond = game.condition
    if isinstance(cond, (RequestResponse, Streett)):
        if not cond.pairs:
            raise GameError("pair list is empty")
        for a, b in cond.pairs:
            check(a, type(cond).__name__)
            check(b, type(cond).__name__)
    elif isinstance(cond, Buchi):
        check(cond.final, "Buchi")
    elif isinstance(cond, Parity):
        if len(cond.colors) != n:
            raise BadReference("coloring does not cover the arena")
        if any(not isinstance(c, int) or c < 0 for c in cond.colors):
            raise GameError("parity colors must be non-negative integers")
    else:
        raise WrongConditionType(f"unknown condition {cond!r}")


class Lasso(NamedTuple):
    prefix: tuple
    cycle: tuple


def parity_accepts(colors: Iterable[int], polarity: Polarity) -> bool:
    colors = list(colors)
    best = max(colors) if polarity is Polarity.MAX_EVEN else min(colors)
    return best % 2 == 0


def play_satisfies(condition: Condition, prefix: Sequence[int], cycle: Sequence[int]) -> bool:
    if not cycle:
        raise EmptyCycle("lasso cycle must be non-empty")
    inf = set(cycle)
    if isinstance(condition, Buchi):
        return bool(inf & condition.final)
    if isinstance(condition, Parity):
        return parity_accepts((condition.colors[v] for v in inf), condition.polarity)
    if isinstance(condition, Streett):
        return all(not (inf & f) or bool(inf & e) for e, f in condition.pairs)
    if isinstance(condition, RequestResponse):
        for req, resp in condition.pairs:
            if inf & req and not inf & resp:
                return False
            if inf & resp:
                continue
            # the cycle never responds: the last prefix request must be answered in the prefix
            last_req = max((i for i, v in enumerate(prefix) if v in req), default=None)
            if last_req is not None and not any(v in resp for v in prefix[last_req:]):
                return False
        return True
    raise WrongConditionType(f"unknown condition {condition!r}")


# --- file format -----------------------------------------------------------

_TOP_KEYS = {"vertices", "edges", "condition", "memory_of"}
_COND_KEYS = {
    "rr": {"type", "pairs"},
    "streett": {"type", "pairs"},
    "buchi": {"type", "final"},
    "parity": {"type", "colors", "polarity"},
}


def game_from_dict(data: dict, name: str = "") -> Game:
    if not isinstance(data, dict):
        raise GameError("game document must be an object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise GameError(f"unknown keys: {sorted(unknown)}")
    for key in ("vertices", "edges", "condition"):
        if key not in data:
            raise GameError(f"missing key {key!r}")
    verts = sorted(data["vertices"], key=lambda r: r["id"])
    for rec in verts:
        extra = set(rec) - {"id", "owner", "label"}
        if extra:
            raise GameError(f"unknown vertex keys: {sorted(extra)}")
        if rec.get("owner") not in (0, 1):
            raise GameError(f"vertex {rec.get('id')} has owner {rec.get('owner')!r}")
    if [r["id"] for r in verts] != list(range(len(verts))):
        raise BadReference("vertex ids must be contiguous from 0")
    n = len(verts)
    edges = []
    for e in data["edges"]:
        s, d = e
        if not (0 <= s < n and 0 <= d < n):
            raise BadReference(f"edge {s}->{d} leaves the arena")
        edges.append((s, d))
    labels = [r.get("label") for r in verts]
    arena = Arena.from_edges([r["owner"] for r in verts], edges,
                             labels if any(l is not None for l in labels) else None)

    c = data["condition"]
    kind = c.get("type")
    if kind not in _COND_KEYS:
        raise GameError(f"unknown condition type {kind!r}")
    unknown = set(c) - _COND_KEYS[kind]
    if unknown:
        raise GameError(f"unknown condition keys: {sorted(unknown)}")
    if kind == "rr":
        cond: Condition = RequestResponse(make_pairs(c["pairs"]))
    elif kind == "streett":
        cond = Streett(make_pairs(c["pairs"]))
    elif kind == "buchi":
        cond = Buchi(frozenset(c["final"]))
    else:
        colors = c["colors"]
        if isinstance(colors, dict):
            colors = [colors[str(v)] if str(v) in colors else colors[v] for v in range(n)]
        cond = Parity(tuple(colors), Polarity(c.get("polarity", "max-even")))
    game = Game(arena, cond, name)
    validate(game)
    return game


def game_to_dict(game: Game, memory_of=None) -> dict:
    arena = game.arena
    verts = []
    for v in range(len(arena)):
        rec = {"id": v, "owner": int(arena.owners[v])}
        if arena.label(v) is not None:
            rec["label"] = arena.label(v)
        verts.append(rec)
    cond = game.condition
    if isinstance(cond, (RequestResponse, Streett)):
        c = {"type": "rr" if isinstance(cond, RequestResponse) else "streett",
             "pairs": [[sorted(a), sorted(b)] for a, b in cond.pairs]}
    elif isinstance(cond, Buchi):
        c = {"type": "buchi", "final": sorted(cond.final)}
    else:
        c = {"type": "parity", "colors": list(cond.colors), "polarity": cond.polarity.value}
    out = {"vertices": verts, "edges": [list(e) for e in arena.edges()], "condition": c}
    if memory_of is not None:
        out["memory_of"] = [[str(m), v] for m, v in memory_of]
    return out


def load_game(path) -> Game:
    from pathlib import Path

    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GameError(f"{path}: {exc}") from exc
    data.pop("memory_of", None)
    return game_from_dict(data, name=path.stem)


def dump_game(game: Game, path=None, memory_of=None) -> str:
    text = json.dumps(game_to_dict(game, memory_of), indent=1)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text


def game_to_dot(game: Game) -> str:
    arena = game.arena
    cond = game.condition
    lines = ["digraph game {", "  rankdir=LR;"]
    for v in range(len(arena)):
        shape = "circle" if arena.owners[v] is Player.P0 else "box"
        extra = ""
        if isinstance(cond, Buchi) and v in cond.final:
            extra = ", peripheries=2"
        label = arena.name(v)
        if isinstance(cond, Parity):
            label += f" c={cond.colors[v]}"
        lines.append(f'  {v} [label="{label}", shape={shape}{extra}];')
    for v, w in arena.edges():
        lines.append(f"  {v} -> {w};")
    lines.append("}")
    return "\n".join(lines) + "\n"
