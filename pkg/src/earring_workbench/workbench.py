"""Single facade shared by the CLI and the agent tools."""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import TYPE_CHECKING, Any

from pydantic import BaseModel, Field, PrivateAttr

from earring_workbench.certified import PiEnclosure, format_rational, parse_rational, pi_enclosure
from earring_workbench.config import WorkbenchSettings
from earring_workbench.currents import (
    CertificateCheck,
    ChainRepresentation,
    GraphCurrent,
    current_to_chain,
    load_current,
    verify_certificate,
)
from earring_workbench.earring import SigmaMap, project_word, sample_times, sigma_path
from earring_workbench.errors import DomainError, SequenceError, WorkbenchError
from earring_workbench.freegroup import (
    CommutatorSearch,
    Word,
    abelianize,
    commutator_power,
    is_single_commutator,
)
from earring_workbench.graphs import MetricGraph
from earring_workbench.homology import (
    HomologyGroup,
    SimplicialComplex,
    SimplicialComplexMatrixSet,
    homology,
    rational_betti,
)
from earring_workbench.seqorder import (
    DensityReport,
    Seq,
    density_report,
    enumerate_b,
    tau,
    tau_oracle,
)

if TYPE_CHECKING:
    from earring_workbench.suites import SuiteReport

logger = logging.getLogger(__name__)


class TauReport(BaseModel):
    seq: str
    tau: str
    depth: int
    oracle: tuple[str, str]
    contained: bool

    def __str__(self) -> str:
        verdict = "OK" if self.contained else "FAIL"
        return f"{self.tau} ∈ [{self.oracle[0]}, {self.oracle[1]}] {verdict}"


class WordReport(BaseModel):
    k: int
    word: str
    exponent: int = Field(description="k!, the expected power of the commutator [a,b].")
    equals_power: bool
    abelianization: str
    is_single_commutator: bool | None = None
    witness: dict[str, Any] | None = None

    def __str__(self) -> str:
        relation = "equals" if self.equals_power else "differs from"
        parts = [self.word, f"{relation} [a,b]^{self.exponent}",
                 f"abelianization {self.abelianization}"]
        if self.is_single_commutator is not None:
            parts.append(f"is_single_commutator: {str(self.is_single_commutator).lower()}")
        return "; ".join(parts)


class HomologyReport(BaseModel):
    groups: list[str]
    betti: list[int]
    torsion: list[list[int]]
    rational_betti: list[int]

    @property
    def consistent(self) -> bool:
        return self.betti == self.rational_betti


class CurrentReport(BaseModel):
    representation: dict[str, Any]
    check: CertificateCheck

    @property
    def passed(self) -> bool:
        return self.check.passed


@dataclass(frozen=True)
class SigmaSample:
    t: Fraction
    circle: int
    turn: Fraction
    error_bound: Fraction

    def row(self) -> list[str | int]:
        return [format_rational(self.t), self.circle, format_rational(self.turn),
                format_rational(self.error_bound)]


class Workbench(BaseModel):
    """Settings plus lazily built shared data (pi enclosure, truncated earring graph)."""

    settings: WorkbenchSettings = Field(default_factory=WorkbenchSettings.load)

    _pi: PiEnclosure | None = PrivateAttr(default=None)
    _earring: MetricGraph | None = PrivateAttr(default=None)

    model_config = {"arbitrary_types_allowed": True}

    @property
    def pi(self) -> PiEnclosure:
        if self._pi is None:
            self._pi = pi_enclosure(self.settings.pi_digits)
        return self._pi

    @property
    def earring_graph(self) -> MetricGraph:
        if self._earring is None:
            self._earring = MetricGraph.hawaiian(self.settings.max_circle)
        return self._earring

    # -- seqorder ------------------------------------------------------------

    def tau(self, literal: str, depth: int | None = None) -> TauReport:
        s = Seq.parse(literal)
        depth = depth or self.settings.oracle_depth
        if depth < len(s):
            raise SequenceError(f"oracle depth {depth} is shorter than <{s}>")
        value = tau(s)
        lo, hi = tau_oracle(s, depth)
        return TauReport(seq=str(s), tau=format_rational(value), depth=depth,
                         oracle=(format_rational(lo), format_rational(hi)),
                         contained=lo <= value <= hi)

    def enumerate_b(self, n: int) -> list[Seq]:
        return enumerate_b(n, self.settings.max_enumeration_depth)

    def density(self, depth: int, grid: int | None = None) -> DensityReport:
        return density_report(depth, grid or self.settings.density_grid)

    # -- earring -------------------------------------------------------------

    def sigma_samples(self, n: int, samples: int, depth: int | None = None) -> list[SigmaSample]:
        if not 1 <= n <= self.settings.max_recursion_n:
            raise DomainError(f"sigma_n is sampled for 1 <= n <= {self.settings.max_recursion_n}")
        sigma_n = SigmaMap(n, depth or self.settings.recursion_depth, self.pi)
        rows = []
        for t in sample_times(sigma_n.duration, samples):
            evaluation = sigma_n.evaluate(t)
            rows.append(SigmaSample(t, evaluation.point.circle, evaluation.point.turn,
                                    evaluation.error_bound))
        return rows

    def project_word(self, k: int) -> WordReport:
        if not 1 <= k <= self.settings.max_word_k:
            raise DomainError(
                f"projected words are computed for 1 <= k <= {self.settings.max_word_k}"
            )
        word = project_word(sigma_path(k, self.pi), k, self.pi)
        exponent = factorial(k)
        a, b = Word.generator(1), Word.generator(2)
        report = WordReport(
            k=k,
            word=str(word),
            exponent=exponent,
            equals_power=word == commutator_power(a, b, exponent),
            abelianization=str(abelianize(word)),
        )
        if k <= 2:
            search = is_single_commutator(word)
            report.is_single_commutator = search.is_commutator
            report.witness = search.to_json()["witness"]
        return report

    def commutator_search(self, literal: str) -> CommutatorSearch:
        return is_single_commutator(Word.parse(literal))

    # -- homology and currents -------------------------------------------------

    def homology(self, data: Mapping[str, Any]) -> HomologyReport:
        """``data`` holds ``facets`` or explicit ``sizes`` and ``matrices``."""
        try:
            if "facets" in data:
                matrices = SimplicialComplex.from_facets(data["facets"]).boundary_matrices()
            else:
                matrices = SimplicialComplexMatrixSet.create(data["sizes"], data["matrices"])
        except (KeyError, TypeError) as exc:
            raise WorkbenchError(f"malformed complex description: {exc}") from exc
        groups: list[HomologyGroup] = homology(matrices)
        return HomologyReport(
            groups=[str(g) for g in groups],
            betti=[g.betti for g in groups],
            torsion=[list(g.torsion) for g in groups],
            rational_betti=rational_betti(matrices),
        )

    def load_current(self, data: Mapping[str, Any]) -> GraphCurrent:
        graph = self.earring_graph if "graph" not in data else None
        return load_current(data, graph)

    def current_to_chain(self, data: Mapping[str, Any],
                         epsilon: str | Fraction) -> tuple[ChainRepresentation, CurrentReport]:
        current = self.load_current(data)
        result = current_to_chain(current, parse_rational(epsilon),
                                  self.settings.contraction_gamma, self.settings.cover_max_depth)
        check = verify_certificate(current, result)
        return result, CurrentReport(representation=result.to_json(), check=check)

    # -- suites ---------------------------------------------------------------

    def run_suite(self, name: str) -> SuiteReport:
        from earring_workbench.suites import run_suite

        return run_suite(name, self)
