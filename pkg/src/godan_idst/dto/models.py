"""
Data Transfer Objects (DTOs) and Models for godan-idst.

This module defines the value types exchanged between the builder, the oracle,
the verifier and the command line, and the marshmallow schemas for their JSON
forms. Vertices are serialized in one-line notation (comma form for n >= 10).
"""

from enum import StrEnum
from typing import Any

import marshmallow as ma
from attrs import define, field, validators

from godan_idst.core.exceptions import PermutationError
from godan_idst.core.graphs import edge
from godan_idst.core.permutations import MIN_ORDER, Permutation
from godan_idst.core.trees import Tree


class Lemma(StrEnum):
    """
    The construction that produced a tree set.

    Attributes:
        BASE_EA3: n = 3, by exact packing.
        RECURSE: all four terminals in one cluster.
        S4: all four terminals in one AN part.
        ANS3: three terminals in one AN part, one in the other.
        S3: a (3, 1) cluster split.
        S22: a (2, 2) cluster split.
        S211: a (2, 1, 1) cluster split.
        S1111: at most one terminal per cluster at every position.
        SEARCH: generic exact packing (fallback path).
    """

    BASE_EA3 = "EA3"
    RECURSE = "Recurse"
    S4 = "S4"
    ANS3 = "ANS3"
    S3 = "S3"
    S22 = "S22"
    S211 = "S211"
    S1111 = "S1111"
    SEARCH = "Search"


class OutputFormat(StrEnum):
    JSON = "json"
    DOT = "dot"
    CSV = "csv"


SUSPECT_MARK = "?"


@define(frozen=True, kw_only=True)
class CaseTag:
    """
    Identifies the proof branch behind a tree set.

    Attributes:
        lemma (Lemma): The construction.
        branch (str): Case/subcase path inside the construction, e.g. ``Case3/Subcase3.1.2``.
        roles (tuple[str, ...]): Terminals in role order (x, y, z, w) as one-line strings.
        position (int | None): Cluster position m used, when clusters were involved.
        translation (str | None): The left translation applied before building, if any.
        suspect (bool): True when the set came from the fallback search after the
            lemma branch failed.
    """

    lemma: Lemma = field(validator=validators.instance_of(Lemma))
    branch: str = field(default="", validator=validators.instance_of(str))
    roles: tuple[str, ...] = field(default=(), converter=tuple)
    position: int | None = field(default=None)
    translation: str | None = field(default=None)
    suspect: bool = field(default=False, validator=validators.instance_of(bool))

    def __str__(self) -> str:
        text = f"{self.lemma}/{self.branch}" if self.branch else str(self.lemma)
        return text + SUSPECT_MARK if self.suspect else text

    @classmethod
    def parse(cls, text: str) -> "CaseTag":
        suspect = text.endswith(SUSPECT_MARK)
        body = text.removesuffix(SUSPECT_MARK)
        lemma, _, branch = body.partition("/")
        return cls(lemma=Lemma(lemma), branch=branch, suspect=suspect)

    def nested(self, inner: "CaseTag") -> "CaseTag":
        """Append an inner construction's tag, as when a lemma delegates to another."""
        branch = f"{self.branch}>{inner}" if self.branch else str(inner)
        return CaseTag(
            lemma=self.lemma,
            branch=branch,
            roles=self.roles,
            position=self.position,
            translation=self.translation,
            suspect=self.suspect or inner.suspect,
        )


def _tree_tuple(value: Any) -> tuple[Tree, ...]:
    return tuple(value)


@define(frozen=True, kw_only=True)
class SteinerTreeSet:
    """
    A family of internally disjoint S-trees.

    Attributes:
        n (int): Order of the host graph.
        terminals (tuple[Permutation, ...]): The terminal set S, sorted by rank.
        trees (tuple[Tree, ...]): The trees.
        case (CaseTag): The branch that built them.
    """

    n: int = field(validator=[validators.instance_of(int), validators.ge(MIN_ORDER)])
    terminals: tuple[Permutation, ...] = field(converter=lambda s: tuple(sorted(s)))
    trees: tuple[Tree, ...] = field(converter=_tree_tuple)
    case: CaseTag = field(validator=validators.instance_of(CaseTag))

    def __len__(self) -> int:
        return len(self.trees)

    def map(self, fn: Any, *, case: CaseTag | None = None) -> "SteinerTreeSet":
        """Apply a vertex bijection to terminals and trees."""
        return SteinerTreeSet(
            n=self.n,
            terminals=[fn(s) for s in self.terminals],
            trees=[t.map(fn) for t in self.trees],
            case=case or self.case,
        )


@define(frozen=True, kw_only=True)
class PackingResult:
    """
    Maximum number of internally disjoint S-trees found by the oracle.

    Attributes:
        terminals (tuple): The terminal set.
        max_t (int): Largest t for which a packing was found.
        witness (tuple[Tree, ...] | None): A packing of size ``max_t``.
        explored (int): Exact-search nodes visited over all probes.
        complete (bool): False when the search budget ran out before ``max_t + 1``
            was refuted, i.e. the value is only a lower bound.
    """

    terminals: tuple[Any, ...] = field(converter=tuple)
    max_t: int = field(validator=[validators.instance_of(int), validators.ge(0)])
    witness: tuple[Tree, ...] | None = field(default=None)
    explored: int = field(default=0)
    complete: bool = field(default=True)


@define(frozen=True, kw_only=True)
class KappaResult:
    """
    Generalized k-connectivity over all (or sampled) k-subsets.

    Attributes:
        graph (str): Graph label, e.g. ``EA_4``.
        k (int): Terminal set size.
        value (int): The minimum found; exact when ``exhaustive`` and ``complete``.
        exhaustive (bool): Whether every k-subset was examined.
        subsets (int): Number of subsets evaluated.
        minimizer (tuple | None): A subset attaining ``value``.
        seed (int | None): Sampling seed.
        complete (bool): False when some subset's search hit its budget.
    """

    graph: str = field(validator=validators.instance_of(str))
    k: int = field(validator=validators.instance_of(int))
    value: int = field(validator=validators.instance_of(int))
    exhaustive: bool = field(default=True)
    subsets: int = field(default=0)
    minimizer: tuple[Any, ...] | None = field(default=None)
    seed: int | None = field(default=None)
    complete: bool = field(default=True)


@define(frozen=True, kw_only=True)
class DescentResult:
    """
    κ_k and κ_{k-1} of one graph next to the bound r - 1 with r = δ(G).

    ``holds`` is False only when κ_k = r - 1 but κ_{k-1} differs.
    """

    graph: str
    k: int
    r: int
    kappa_k: int
    kappa_k_minus_1: int

    @property
    def premise(self) -> bool:
        return self.kappa_k == self.r - 1

    @property
    def holds(self) -> bool:
        return not self.premise or self.kappa_k_minus_1 == self.r - 1


@define(frozen=True, kw_only=True)
class VerificationCheck:
    name: str = field(validator=validators.instance_of(str))
    passed: bool = field(validator=validators.instance_of(bool))
    detail: str = field(default="")


@define(kw_only=True)
class VerificationReport:
    """
    Structured verifier output.

    Attributes:
        subject (str): What was checked.
        checks (list[VerificationCheck]): Individual results, in check order.
    """

    subject: str = field(validator=validators.instance_of(str))
    checks: list[VerificationCheck] = field(factory=list)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(VerificationCheck(name=name, passed=bool(passed), detail=detail))

    def extend(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)

    def failures(self) -> list[VerificationCheck]:
        return [c for c in self.checks if not c.passed]


@define(frozen=True, kw_only=True)
class RunConfig:
    """
    Options of one CLI invocation, recorded alongside its artifacts.

    Attributes:
        n (int): Graph order.
        command (str): CLI command name.
        subsets (str): ``explicit``, ``exhaustive`` or ``sample``.
        sample (int | None): Sample size for ``sample``.
        seed (int): Sampling seed.
        out (str | None): Output path, None for stdout.
        fmt (OutputFormat): Output format.
        jobs (int): Worker processes.
        fallback_search (bool): Whether failed branches fall back to exact packing.
        position (int | None): Cluster position m.
        timings (bool): Whether to measure ``millis``.
    """

    n: int = field(validator=[validators.instance_of(int), validators.ge(MIN_ORDER)])
    command: str = field(validator=validators.instance_of(str))
    subsets: str = field(
        default="explicit", validator=validators.in_(["explicit", "exhaustive", "sample"])
    )
    sample: int | None = field(default=None)
    seed: int = field(default=7)
    out: str | None = field(default=None)
    fmt: OutputFormat = field(default=OutputFormat.JSON, converter=OutputFormat)
    jobs: int = field(default=1, validator=validators.ge(1))
    fallback_search: bool = field(default=True)
    position: int | None = field(default=None)
    timings: bool = field(default=False)


@define(frozen=True, kw_only=True)
class SweepRow:
    """
    One CSV row of a sweep.

    Attributes:
        n (int): Graph order.
        terminals (tuple[str, ...]): One-line strings of S in rank order.
        trees (int): Trees returned (0 when the build failed).
        case_tag (str): `CaseTag` text, or the error class name on failure.
        verify (bool): Verifier verdict.
        millis (int): Build time; 0 unless timings were requested.
    """

    n: int = field(validator=validators.instance_of(int))
    terminals: tuple[str, ...] = field(converter=tuple)
    trees: int = field(validator=validators.instance_of(int))
    case_tag: str = field(validator=validators.instance_of(str))
    verify: bool = field(validator=validators.instance_of(bool))
    millis: int = field(default=0)


CSV_COLUMNS = ("n", "S", "trees", "case_tag", "verify", "millis")


class PermutationField(ma.fields.Field):
    """A vertex in one-line notation."""

    def _serialize(self, value: Any, attr: str | None, obj: Any, **kwargs: Any) -> str | None:
        if value is None:
            return None
        return str(value)

    def _deserialize(self, value: Any, attr: str | None, data: Any, **kwargs: Any) -> Permutation:
        if not isinstance(value, str):
            raise ma.ValidationError("a permutation must be a one-line string")
        try:
            return Permutation.parse(value)
        except PermutationError as exc:
            raise ma.ValidationError(str(exc)) from exc


class EdgeField(ma.fields.Field):
    """An undirected edge as a two-element list of one-line strings."""

    def _serialize(self, value: Any, attr: str | None, obj: Any, **kwargs: Any) -> list[str]:
        return [str(v) for v in value]

    def _deserialize(self, value: Any, attr: str | None, data: Any, **kwargs: Any) -> tuple:
        if not isinstance(value, list | tuple) or len(value) != 2:  # noqa: PLR2004
            raise ma.ValidationError("an edge is a pair of vertices")
        try:
            u, v = (Permutation.parse(item) for item in value)
        except (PermutationError, AttributeError) as exc:
            raise ma.ValidationError(str(exc)) from exc
        return edge(u, v)


class CaseTagField(ma.fields.Field):
    def _serialize(self, value: Any, attr: str | None, obj: Any, **kwargs: Any) -> str:
        return str(value)

    def _deserialize(self, value: Any, attr: str | None, data: Any, **kwargs: Any) -> CaseTag:
        try:
            return CaseTag.parse(value)
        except (ValueError, AttributeError) as exc:
            raise ma.ValidationError(f"unknown case tag {value!r}") from exc


class SteinerTreeSetSchema(ma.Schema):
    """
    JSON form ``{n, S, case, trees}``; each tree is its sorted edge list.
    """

    n = ma.fields.Int(required=True, validate=ma.validate.Range(min=MIN_ORDER))
    terminals = ma.fields.List(PermutationField(), required=True, data_key="S")
    case = CaseTagField(required=True)
    trees = ma.fields.Method("dump_trees", deserialize="load_trees", required=True)

    def dump_trees(self, obj: SteinerTreeSet) -> list[list[list[str]]]:
        return [[[str(u), str(v)] for u, v in tree.sorted_edges()] for tree in obj.trees]

    def load_trees(self, value: Any) -> list[Tree]:
        field_ = EdgeField()
        return [Tree.from_edges(field_.deserialize(e) for e in tree) for tree in value]

    @ma.post_load
    def make_tree_set(self, data: dict[str, Any], **kwargs: Any) -> SteinerTreeSet:
        return SteinerTreeSet(**data)


class VerificationCheckSchema(ma.Schema):
    name = ma.fields.Str(required=True)
    passed = ma.fields.Bool(required=True)
    detail = ma.fields.Str(dump_default="", load_default="")

    @ma.post_load
    def make_check(self, data: dict[str, Any], **kwargs: Any) -> VerificationCheck:
        return VerificationCheck(**data)


class VerificationReportSchema(ma.Schema):
    subject = ma.fields.Str(required=True)
    overall = ma.fields.Bool(dump_only=True)
    checks = ma.fields.List(ma.fields.Nested(VerificationCheckSchema), required=True)

    @ma.post_load
    def make_report(self, data: dict[str, Any], **kwargs: Any) -> VerificationReport:
        return VerificationReport(**data)


class PackingResultSchema(ma.Schema):
    """Oracle rows ``{S, max_t, witness?, nodes, complete}``."""

    terminals = ma.fields.List(ma.fields.Raw(), data_key="S")
    max_t = ma.fields.Int(required=True)
    witness = ma.fields.Method("dump_witness")
    explored = ma.fields.Int(data_key="nodes")
    complete = ma.fields.Bool()

    def dump_witness(self, obj: PackingResult) -> list[list[list[str]]] | None:
        if obj.witness is None:
            return None
        return [[[str(u), str(v)] for u, v in tree.sorted_edges()] for tree in obj.witness]

    @ma.pre_dump
    def stringify_terminals(self, obj: PackingResult, **kwargs: Any) -> PackingResult:
        return PackingResult(
            terminals=[str(s) for s in obj.terminals],
            max_t=obj.max_t,
            witness=obj.witness,
            explored=obj.explored,
            complete=obj.complete,
        )


class KappaResultSchema(ma.Schema):
    graph = ma.fields.Str(required=True)
    k = ma.fields.Int(required=True)
    value = ma.fields.Int(required=True)
    exhaustive = ma.fields.Bool()
    subsets = ma.fields.Int()
    minimizer = ma.fields.Function(
        lambda obj: None if obj.minimizer is None else [str(v) for v in obj.minimizer]
    )
    seed = ma.fields.Int(allow_none=True)
    complete = ma.fields.Bool()


class SweepRowSchema(ma.Schema):
    """CSV/JSON row; ``S`` is semicolon-joined."""

    n = ma.fields.Int(required=True)
    terminals = ma.fields.Method("dump_terminals", deserialize="load_terminals", data_key="S")
    trees = ma.fields.Int(required=True)
    case_tag = ma.fields.Str(required=True)
    verify = ma.fields.Bool(required=True)
    millis = ma.fields.Int(dump_default=0, load_default=0)

    def dump_terminals(self, obj: SweepRow) -> str:
        return ";".join(obj.terminals)

    def load_terminals(self, value: str) -> tuple[str, ...]:
        return tuple(value.split(";"))

    @ma.post_load
    def make_row(self, data: dict[str, Any], **kwargs: Any) -> SweepRow:
        return SweepRow(**data)


class GraphDumpSchema(ma.Schema):
    """JSON graph dump ``{graph, n, vertices, edges}``."""

    graph = ma.fields.Str(required=True)
    n = ma.fields.Int(required=True)
    vertices = ma.fields.List(PermutationField())
    edges = ma.fields.List(EdgeField())
