"""
JSON schemas for surfaces, loops and scenarios.

Every model converts itself into the frozen core types (`to_core`) and can be
rebuilt from them (`from_core`). Rationals travel as "p/q" strings; decimal
strings and integers are accepted on input and converted exactly.
"""
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .core.errors import InputError, MalformedLoopError
from .core.loops import CONSTANT_LOOP, Chord, GenericLoop, YPath
from .core.surface import BoundaryPoint, Gate, QuasiSurface, YEdge, as_fraction
from .core.words import parse_letter


def _rational_text(value: Union[str, int]) -> str:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ValueError("rationals must be given as strings such as '3/25' or '0.12'")
    try:
        return str(as_fraction(value))
    except InputError as exc:
        raise ValueError(str(exc)) from exc


# --- surface -------------------------------------------------------------

class GateModel(BaseModel):
    id: str
    arc: List[str] = Field(min_length=2, max_length=2)
    vertex: str

    @field_validator("arc", mode="before")
    @classmethod
    def _exact_arc(cls, value):
        return [_rational_text(v) for v in value]

    def to_core(self) -> Gate:
        return Gate(self.id, as_fraction(self.arc[0]), as_fraction(self.arc[1]), self.vertex)

    @classmethod
    def from_core(cls, gate: Gate) -> "GateModel":
        return cls(id=gate.id, arc=[str(gate.lo), str(gate.hi)], vertex=gate.vertex)


class EdgeModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    id: str
    source: str = Field(alias="from")
    target: str = Field(alias="to")

    def to_core(self) -> YEdge:
        return YEdge(self.id, self.source, self.target)


class YGraphModel(BaseModel):
    vertices: List[str]
    edges: List[EdgeModel] = Field(default_factory=list)


class SurfaceModel(BaseModel):
    gates: List[GateModel]
    ygraph: YGraphModel

    def to_core(self) -> QuasiSurface:
        return QuasiSurface(
            gates=tuple(g.to_core() for g in self.gates),
            vertices=tuple(self.ygraph.vertices),
            edges=tuple(e.to_core() for e in self.ygraph.edges),
        )

    @classmethod
    def from_core(cls, qs: QuasiSurface) -> "SurfaceModel":
        return cls(
            gates=[GateModel.from_core(g) for g in qs.gates],
            ygraph=YGraphModel(
                vertices=list(qs.vertices),
                edges=[EdgeModel(id=e.id, source=e.source, target=e.target) for e in qs.edges],
            ),
        )


# --- loops ---------------------------------------------------------------

class PointModel(BaseModel):
    gate: str
    u: str

    @field_validator("u", mode="before")
    @classmethod
    def _exact_u(cls, value):
        return _rational_text(value)

    def to_core(self) -> BoundaryPoint:
        return BoundaryPoint(self.gate, as_fraction(self.u))


class ChordModel(BaseModel):
    enter: PointModel
    exit: PointModel


class StrandModel(BaseModel):
    chord: Optional[ChordModel] = None
    ypath: Optional[List[str]] = None

    @model_validator(mode="after")
    def _one_kind(self):
        if (self.chord is None) == (self.ypath is None):
            raise ValueError("a strand is either a chord or a ypath")
        return self


class LoopModel(BaseModel):
    strands: List[StrandModel] = Field(default_factory=list)

    def to_core(self) -> GenericLoop:
        """Chords and Y paths in order; a missing path between two chords is empty."""
        chords, paths = [], []
        leading = ()
        for strand in self.strands:
            if strand.chord is not None:
                if len(paths) < len(chords):
                    paths.append(YPath())
                chords.append(Chord(strand.chord.enter.to_core(), strand.chord.exit.to_core()))
                continue
            letters = tuple(parse_letter(text) for text in strand.ypath)
            if not chords:
                if leading:
                    raise MalformedLoopError("chords and Y paths must alternate")
                leading = letters
            elif len(paths) == len(chords):
                raise MalformedLoopError("chords and Y paths must alternate")
            else:
                paths.append(YPath(letters))
        if not chords:
            return GenericLoop((), (YPath(leading),)) if leading else CONSTANT_LOOP
        if len(paths) < len(chords):
            paths.append(YPath())
        if leading:
            paths[-1] = YPath(paths[-1].letters + leading)
        return GenericLoop(tuple(chords), tuple(paths))

    @classmethod
    def from_core(cls, loop: GenericLoop) -> "LoopModel":
        strands = []
        for chord, path in zip(loop.chords, loop.paths):
            strands.append(StrandModel(chord=ChordModel(
                enter=PointModel(gate=chord.enter.gate, u=str(chord.enter.u)),
                exit=PointModel(gate=chord.exit.gate, u=str(chord.exit.u)),
            )))
            strands.append(StrandModel(ypath=[str(l) for l in path.letters]))
        if not loop.chords and loop.paths and loop.paths[0].letters:
            strands.append(StrandModel(ypath=[str(l) for l in loop.paths[0].letters]))
        return cls(strands=strands)

    def dump(self) -> dict:
        return self.model_dump(exclude_none=True)


# --- scenario and requests ---------------------------------------------------

class ScenarioModel(BaseModel):
    surface: SurfaceModel
    loops: Dict[str, LoopModel] = Field(default_factory=dict)
    ring: str = "Z"
    omega: Optional[str] = None
    seed: Optional[int] = Field(default=None, ge=0)


class LoopRequest(BaseModel):
    scenario: ScenarioModel
    loop: str


class OpRequest(BaseModel):
    scenario: ScenarioModel
    args: List[str] = Field(default_factory=list)
    m: Optional[int] = Field(default=None, ge=1)
    gate: Optional[str] = None
    ring: Optional[str] = None
    omega: Optional[str] = None
    seed: Optional[int] = Field(default=None, ge=0)


class VerifyRequest(BaseModel):
    theorem: str
    seed: Optional[int] = Field(default=None, ge=0)
    trials: Optional[int] = Field(default=None, ge=1)
    ring: str = "Z"
    flip_gate_sign: bool = False


def word_json(word) -> Dict[str, object]:
    return {"word": str(word), "letters": word.to_json()}
