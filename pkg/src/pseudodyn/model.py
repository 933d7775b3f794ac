"""Model-file ingestion: one self-describing JSON document per instance.

Rationals are parsed exactly (decimal literals never become floats), every
module-level invariant is validated at load, and all auto-completions
(identity, inverses, linked cores) are recorded in the load report.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import InputError
from .measure import FiniteMeasure
from .morphism import SpaceIso
from .pseudogroup import GeneratingSystem, PartialMap
from .space import FiniteMetricSpace

SCHEMA_VERSION = 1


@dataclass
class LoadReport:
    auto_added: list = field(default_factory=list)
    notes: list = field(default_factory=list)


@dataclass
class Model:
    space: FiniteMetricSpace
    system: GeneratingSystem
    measure: Optional[FiniteMeasure]
    iso: Optional[SpaceIso]
    report: LoadReport
    sha256: str
    path: Optional[str] = None


def _exact_loads(text: str):
    try:
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise InputError(f"not valid JSON: {exc}") from exc


def parse_model(text: str, path: str | None = None) -> Model:
    doc = _exact_loads(text)
    if not isinstance(doc, dict):
        raise InputError("model file must be a JSON object")
    schema = doc.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise InputError(f"unsupported schema version {schema!r}")
    report = LoadReport()

    if "points" not in doc or "dist" not in doc:
        raise InputError("model needs 'points' and 'dist'")
    space = FiniteMetricSpace(doc["points"], doc["dist"])

    maps = []
    cores: Optional[dict] = None
    for fragment in doc.get("generators", []):
        if "map" not in fragment:
            raise InputError("generator fragment needs a 'map'")
        name = fragment.get("name")
        mapping = fragment["map"]
        if "dom" in fragment:
            declared = set(fragment["dom"])
            if declared != set(mapping):
                raise InputError(
                    f"generator {name!r}: 'dom' disagrees with the map keys")
        g = PartialMap.from_dict(space, mapping, name=name)
        maps.append(g)
        if "core" in fragment:
            if name is None:
                raise InputError("a cored generator needs a name")
            cores = cores or {}
            cores[name] = {space.index(p) for p in fragment["core"]}
    before = {PartialMap(space, m.vals) for m in maps}
    system = GeneratingSystem.build(space, maps, cores=cores)
    for g in system.generators:
        if PartialMap(space, g.vals) not in before:
            report.auto_added.append(g.name or "id")
    if cores is not None:
        linked = [g.name for g in system.generators
                  if g.name and g.name not in cores and not g.is_identity()]
        if linked:
            report.notes.append(
                f"cores for {linked} defaulted to images/domains")

    measure = None
    if "mu" in doc:
        measure = FiniteMeasure.from_dict(space, doc["mu"])

    iso = None
    if "phi" in doc:
        if "target" in doc:
            target = FiniteMetricSpace(doc["target"]["points"],
                                       doc["target"]["dist"])
        else:
            phi = doc["phi"]
            target = FiniteMetricSpace(
                [phi[p] for p in space.points],
                [[space.dist[i][j] for j in range(space.n)]
                 for i in range(space.n)],
            )
            report.notes.append("iso target defaulted to a relabeled copy")
        iso = SpaceIso.from_dict(space, target, doc["phi"])

    sha = hashlib.sha256(text.encode()).hexdigest()
    return Model(space=space, system=system, measure=measure, iso=iso,
                 report=report, sha256=sha, path=path)


def load_model(path: str) -> Model:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read model file {path}: {exc}") from exc
    return parse_model(text, path=path)


def load_measure(path: str, space: FiniteMetricSpace) -> FiniteMeasure:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = _exact_loads(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read measure file {path}: {exc}") from exc
    if "mu" not in doc:
        raise InputError("measure file needs a 'mu' object")
    return FiniteMeasure.from_dict(space, doc["mu"])


def load_iso(path: str, space: FiniteMetricSpace) -> SpaceIso:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = _exact_loads(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read iso file {path}: {exc}") from exc
    if "phi" not in doc:
        raise InputError("iso file needs a 'phi' object")
    if "target" in doc:
        target = FiniteMetricSpace(doc["target"]["points"], doc["target"]["dist"])
    else:
        phi = doc["phi"]
        target = FiniteMetricSpace(
            [phi[p] for p in space.points],
            [[space.dist[i][j] for j in range(space.n)] for i in range(space.n)],
        )
    return SpaceIso.from_dict(space, target, doc["phi"])
