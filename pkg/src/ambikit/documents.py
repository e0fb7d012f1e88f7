"""JSON model documents: validation, spec construction and bundled examples."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import jsonschema

from .modelzoo import (
    GraphSpec,
    LyapunovSpec,
    MalformedSpec,
    ModelSpec,
    StagedTreeSpec,
    build_concentration,
    build_lyapunov,
    build_sem,
    build_staged_tree,
)

__all__ = [
    "DocumentError",
    "ModelDocument",
    "load_document",
    "bundled",
    "bundled_names",
    "schema",
]

FAMILIES = ("concentration", "sem", "staged_tree", "lyapunov")


class DocumentError(ValueError):
    """The document does not match the schema or describes an invalid model."""


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("ambikit").joinpath("data/model-document.schema.json").read_text()
    return json.loads(text)


@dataclass(frozen=True)
class ModelDocument:
    """A validated document: family, family-specific body, options."""

    family: str
    body: Mapping = field(default_factory=dict)
    options: Mapping = field(default_factory=dict)
    label: str = ""

    @classmethod
    def from_json(cls, doc: Mapping | str) -> "ModelDocument":
        if isinstance(doc, str):
            try:
                doc = json.loads(doc)
            except json.JSONDecodeError as exc:
                raise DocumentError(f"not JSON: {exc}") from exc
        try:
            jsonschema.validate(doc, schema())
        except jsonschema.ValidationError as exc:
            where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
            raise DocumentError(f"{where}: {exc.message}") from exc
        body = {k: v for k, v in doc.items() if k not in ("family", "label", "description", "options")}
        return cls(doc["family"], body, dict(doc.get("options", {})), doc.get("label", ""))

    def to_json(self) -> dict:
        out: dict[str, Any] = {"family": self.family}
        if self.label:
            out["label"] = self.label
        out.update(self.body)
        if self.options:
            out["options"] = dict(self.options)
        return out

    @property
    def seed(self) -> int:
        return int(self.options.get("seed", 0))

    def spec(self):
        """The family-specific spec object."""
        try:
            return _SPECS[self.family](self.body, self.label)
        except MalformedSpec as exc:
            raise DocumentError(str(exc)) from exc
        except (KeyError, TypeError, ValueError) as exc:
            raise DocumentError(f"invalid {self.family} document: {exc}") from exc

    def build(self) -> ModelSpec:
        """Construct the model, applying any sampling box override."""
        sp = self.spec()
        try:
            m = _BUILDERS[self.family](sp)
        except MalformedSpec as exc:
            raise DocumentError(str(exc)) from exc
        box = self.options.get("box")
        if box:
            unknown = set(box) - set(m.param_vars.names)
            if unknown:
                raise DocumentError(f"box names unknown parameters: {sorted(unknown)}")
            merged = dict(m.sample_box)
            merged.update({k: tuple(v) for k, v in box.items()})
            m = replace(m, sample_box=merged)
        return m


def _colors(raw: Mapping | None) -> dict:
    return dict(raw or {})


def _graph(body: Mapping, label: str, kind: str) -> GraphSpec:
    edges = [(kind, int(i), int(j)) for i, j in body.get("edges", ())]
    edges += [("bidirected", int(i), int(j)) for i, j in body.get("bidirected", ())]
    return GraphSpec(
        n=int(body["n"]),
        edges=tuple(edges),
        vertex_colors=_colors(body.get("vertex_colors")),
        edge_colors=_colors(body.get("edge_colors")),
        interventions=tuple(tuple(t) for t in body.get("interventions", ())),
        intervention_kind=body.get("intervention_kind", "general"),
        monotone=bool(body.get("monotone", False)),
        mtp2=bool(body.get("mtp2", False)),
        constraints=tuple(body.get("constraints", ())),
        label=label,
    )


def _tree(body: Mapping, label: str) -> StagedTreeSpec:
    stages = tuple(tuple(s) for s in body.get("stages", ()))
    if "binary_depth" in body:
        t = StagedTreeSpec.binary(
            int(body["binary_depth"]), stages, label, body.get("levels"), body.get("coordinates"),
        )
        return replace(t, constraints=tuple(body.get("constraints", ())))
    return StagedTreeSpec(
        children={k: tuple(v) for k, v in body["children"].items()},
        root=body.get("root", "r"),
        stages=stages,
        constraints=tuple(body.get("constraints", ())),
        label=label,
        leaf_labels=dict(body.get("leaf_labels", {})),
    )


def _lyapunov(body: Mapping, label: str) -> LyapunovSpec:
    C = tuple(tuple(Fraction(x) for x in row) for row in body.get("C", ()))
    return LyapunovSpec(
        n=int(body.get("n", 3)),
        support=tuple(tuple(e) for e in body.get("support", ())),
        C=C,
        constraints=tuple(body.get("constraints", ())),
        label=label,
    )


_SPECS = {
    "concentration": lambda b, l: _graph(b, l, "undirected"),
    "sem": lambda b, l: _graph(b, l, "directed"),
    "staged_tree": _tree,
    "lyapunov": _lyapunov,
}

_BUILDERS = {
    "concentration": build_concentration,
    "sem": build_sem,
    "staged_tree": build_staged_tree,
    "lyapunov": build_lyapunov,
}


def load_document(path: str | Path) -> ModelDocument:
    """Read a document from a file path or a bundled example name."""
    p = Path(path)
    if not p.exists() and str(path) in bundled_names():
        return bundled(str(path))
    try:
        text = p.read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    return ModelDocument.from_json(text)


def bundled_names() -> list[str]:
    root = resources.files("ambikit").joinpath("data/models")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def bundled(name: str) -> ModelDocument:
    """One of the example documents shipped with the package."""
    root = resources.files("ambikit").joinpath("data/models")
    f = root.joinpath(f"{name}.json")
    if not f.is_file():
        raise DocumentError(f"no bundled document named {name!r}")
    return ModelDocument.from_json(f.read_text())
