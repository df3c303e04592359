"""Deterministic synthetic corpora with planted naming conventions and,
optionally, planted rule violations with a ground-truth ledger.

Each generated file contains:
  1. one empty declaration per call template (so formal parameter names
     resolve at extraction time),
  2. an exposure block assigning every cluster member to a cluster tag,
     in per-file shuffled order (these assignments are invisible to all
     three pattern extractors but give every member, including held-out
     ones, a shared embedding context),
  3. the convention sites: calls and binary expressions instantiated from
     the templates.

Each file commits to one member per cluster and uses it in every site, the
way a codebase sticks to one naming convention. The trailing freshMembers
members of every cluster are reserved for generalization tests: a file
draws from them only when the per-file draw against freshFileRate selects
the file as fresh, so corpora generated with freshFileRate=0 never show
them at any site while their exposure lines still teach the embedding what
they mean.
"""

import random
import re
from dataclasses import dataclass

from .errors import SpecError
from .frontend.ast import default_alphabet
from .textutil import derive_seed

_IDENT_OK = re.compile(r"^[A-Za-z_$][A-Za-z0-9_$]*$")


@dataclass(frozen=True)
class GroundTruthEntry:
    fileId: str
    line: int
    column: int
    pattern: str
    violationKind: str


@dataclass
class GeneratedCorpus:
    files: tuple       # of (fileId, source text)
    groundTruth: tuple  # of GroundTruthEntry


@dataclass
class ConventionSpec:
    nameClusters: dict      # cluster name -> tuple of identifiers
    callTemplates: tuple    # of (calleeName, (clusterA, clusterB))
    binopTemplates: tuple   # of (side, op, side); side = cluster or "lit:<text>"
    fileCount: int
    sitesPerFile: int
    bugRate: float = 0.0
    seed: int = 0
    freshFileRate: float = 0.0
    freshMembers: int = 1

    def __post_init__(self):
        alphabet = default_alphabet()
        if not self.nameClusters:
            raise SpecError("nameClusters must not be empty")
        clusters = {}
        for cluster, members in self.nameClusters.items():
            members = tuple(members)
            if not members:
                raise SpecError(f"cluster {cluster!r} is empty")
            for m in members:
                if not _IDENT_OK.match(m):
                    raise SpecError(f"cluster member {m!r} is not an identifier")
            clusters[cluster] = members
        self.nameClusters = clusters
        self.callTemplates = tuple(
            (callee, tuple(args)) for callee, args in self.callTemplates
        )
        self.binopTemplates = tuple(tuple(t) for t in self.binopTemplates)
        for callee, args in self.callTemplates:
            if not _IDENT_OK.match(callee):
                raise SpecError(f"callee {callee!r} is not an identifier")
            if len(args) != 2:
                raise SpecError(f"call template {callee!r} needs two arg classes")
            for cls in args:
                if cls not in self.nameClusters:
                    raise SpecError(f"undefined cluster {cls!r}")
        for left, op, right in self.binopTemplates:
            if op not in alphabet:
                raise SpecError(f"operator {op!r} is not in the alphabet")
            for side in (left, right):
                if side.startswith("lit:"):
                    continue
                if side not in self.nameClusters:
                    raise SpecError(f"undefined cluster {side!r}")
        if not (0.0 <= self.bugRate <= 0.5):
            raise SpecError("bugRate must be in [0, 0.5]")
        if not (0.0 <= self.freshFileRate <= 1.0):
            raise SpecError("freshFileRate must be in [0, 1]")
        if self.freshMembers < 0:
            raise SpecError("freshMembers must be non-negative")
        if self.freshFileRate > 0.0 and self.freshMembers < 1:
            raise SpecError(
                "freshFileRate > 0 needs at least one reserved member")
        if self.fileCount < 0 or self.sitesPerFile < 0:
            raise SpecError("fileCount and sitesPerFile must be non-negative")
        if self.sitesPerFile > 0 and not (self.callTemplates
                                          or self.binopTemplates):
            raise SpecError("sites requested but no templates defined")

    def literal_texts(self):
        texts = []
        for left, _, right in self.binopTemplates:
            for side in (left, right):
                if side.startswith("lit:") and side[4:] not in texts:
                    texts.append(side[4:])
        return tuple(texts)


def _file_members(spec, rng, fresh_file):
    chosen = {}
    for cluster in sorted(spec.nameClusters):
        members = spec.nameClusters[cluster]
        k = min(spec.freshMembers, len(members) - 1)
        pool = members[len(members) - k:] if (fresh_file and k) \
            else members[:len(members) - k]
        chosen[cluster] = pool[rng.randrange(len(pool))]
    return chosen


def generate(spec):
    """Render the corpus; a pure function of the spec."""
    alphabet = default_alphabet()
    files = []
    ground_truth = []
    width = max(4, len(str(max(spec.fileCount - 1, 0))))
    for index in range(spec.fileCount):
        fileId = f"file{index:0{width}d}.js"
        rng = random.Random(derive_seed(spec.seed, fileId))
        fresh_file = rng.random() < spec.freshFileRate
        member = _file_members(spec, rng, fresh_file)
        site_operands = sorted(set(member.values())
                               | set(spec.literal_texts()))
        lines = []

        for callee, _ in spec.callTemplates:
            lines.append(f"function {callee}(px, py) {{}}")
        exposure = []
        for cluster in sorted(spec.nameClusters):
            tag = f"{cluster}_tag"
            for m in spec.nameClusters[cluster]:
                exposure.append(f"{tag} = {m};")
                exposure.append(f"{tag} = {m};")
        rng.shuffle(exposure)
        lines.extend(exposure)

        for s in range(spec.sitesPerFile):
            make_call = spec.callTemplates and (
                s % 3 == 0 or not spec.binopTemplates
            )
            if make_call:
                callee, (cls_a, cls_b) = spec.callTemplates[
                    rng.randrange(len(spec.callTemplates))
                ]
                a, b = member[cls_a], member[cls_b]
                if rng.random() < spec.bugRate:
                    lines.append(f"{callee}({b}, {a});")
                    ground_truth.append(GroundTruthEntry(
                        fileId, len(lines), 0, "swapped-args", "arg-swap"))
                else:
                    lines.append(f"{callee}({a}, {b});")
                continue

            left_t, op, right_t = spec.binopTemplates[
                rng.randrange(len(spec.binopTemplates))
            ]
            rendered = [
                side[4:] if side.startswith("lit:") else member[side]
                for side in (left_t, right_t)
            ]

            bug_kind = None
            if rng.random() < spec.bugRate:
                bug_kind = ("wrong-operator", "wrong-operand")[
                    rng.randrange(2)
                ]
            op_out = op
            if bug_kind == "wrong-operator":
                mutated = [o for o in alphabet.binaryOps if o != op][
                    rng.randrange(len(alphabet) - 1)
                ]
                violation = f"op:{op}->{mutated}"
                op_out = mutated
            elif bug_kind == "wrong-operand":
                side_index = rng.randrange(2)
                original = rendered[side_index]
                candidates = [t for t in site_operands if t != original]
                if not candidates:
                    bug_kind = None
                else:
                    replacement = candidates[rng.randrange(len(candidates))]
                    violation = f"operand:{original}->{replacement}"
                    rendered[side_index] = replacement

            expr = f"{rendered[0]} {op_out} {rendered[1]}"
            if s % 2 == 0:
                prefix = f"var v{s} = "
                lines.append(f"{prefix}{expr};")
                column = len(prefix)
            else:
                lines.append(f"if ({expr}) {{ }}")
                column = 4
            if bug_kind is not None:
                ground_truth.append(GroundTruthEntry(
                    fileId, len(lines), column, bug_kind, violation))

        files.append((fileId, "\n".join(lines) + "\n"))
    return GeneratedCorpus(files=tuple(files), groundTruth=tuple(ground_truth))
