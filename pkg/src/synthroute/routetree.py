"""Decision-sequence tree: root = starting molecule, nodes = reactions.

Each node carries cumulative totals along its root path: total yield is the
product of step yields, total duration the sum of step durations. Yield and
duration are Decimal so that chained arithmetic is exact (0.80 * 0.90 is
exactly 0.72, not a float neighborhood of it).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from typing import Iterator, NamedTuple

from . import chem
from .chem import Molecule
from .errors import (
    CannotRemoveRootError,
    ComparisonFullError,
    NodeNotFoundError,
    ParentNotFoundError,
    ReactantMismatchError,
    RootHasNoProductError,
)

ROOT_ID = "root"
MAX_COMPARISON = 5


def as_decimal(value: Decimal | int | float | str) -> Decimal:
    if isinstance(value, Decimal):
        return value
    return Decimal(str(value))


@dataclass(frozen=True)
class DifficultyAnnotation:
    """Three-aspect expert rating; tier 1 = challenging, 3 = simple."""

    material: int
    operation: int
    equipment: int
    note: str = ""

    def __post_init__(self) -> None:
        for aspect in ("material", "operation", "equipment"):
            tier = getattr(self, aspect)
            if tier not in (1, 2, 3):
                raise ValueError(f"{aspect} tier must be 1, 2 or 3, got {tier}")

    def to_dict(self) -> dict:
        return {
            "material": self.material,
            "operation": self.operation,
            "equipment": self.equipment,
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DifficultyAnnotation":
        return cls(
            material=data["material"],
            operation=data["operation"],
            equipment=data["equipment"],
            note=data.get("note", ""),
        )


@dataclass(frozen=True)
class ReactionRecord:
    """One extracted synthetic reaction, normalized for tree insertion."""

    reactant: Molecule
    product: Molecule
    yield_fraction: Decimal
    duration_hours: Decimal
    solvent: str = ""
    reagent: str = ""
    catalysts: str = ""
    instruments: str = ""
    operation: str = ""
    purification: str = ""
    source_doi: str = ""
    context_relevancy: float | None = None
    difficulty: DifficultyAnnotation | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "yield_fraction", as_decimal(self.yield_fraction))
        object.__setattr__(self, "duration_hours", as_decimal(self.duration_hours))
        if not Decimal(0) < self.yield_fraction <= Decimal(1):
            raise ValueError(
                f"yield must be in (0, 1], got {self.yield_fraction}"
            )
        if self.duration_hours < 0:
            raise ValueError(f"duration must be >= 0, got {self.duration_hours}")
        if self.context_relevancy is not None and not 0 <= self.context_relevancy <= 1:
            raise ValueError("context_relevancy must be in [0, 1]")

    def to_dict(self) -> dict:
        return {
            "reactant": self.reactant.smiles_source or chem.write_smiles(self.reactant),
            "product": self.product.smiles_source or chem.write_smiles(self.product),
            "yield_fraction": str(self.yield_fraction),
            "duration_hours": str(self.duration_hours),
            "solvent": self.solvent,
            "reagent": self.reagent,
            "catalysts": self.catalysts,
            "instruments": self.instruments,
            "operation": self.operation,
            "purification": self.purification,
            "source_doi": self.source_doi,
            "context_relevancy": self.context_relevancy,
            "difficulty": self.difficulty.to_dict() if self.difficulty else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ReactionRecord":
        difficulty = data.get("difficulty")
        return cls(
            reactant=chem.parse_smiles(data["reactant"]),
            product=chem.parse_smiles(data["product"]),
            yield_fraction=Decimal(data["yield_fraction"]),
            duration_hours=Decimal(data["duration_hours"]),
            solvent=data.get("solvent", ""),
            reagent=data.get("reagent", ""),
            catalysts=data.get("catalysts", ""),
            instruments=data.get("instruments", ""),
            operation=data.get("operation", ""),
            purification=data.get("purification", ""),
            source_doi=data.get("source_doi", ""),
            context_relevancy=data.get("context_relevancy"),
            difficulty=DifficultyAnnotation.from_dict(difficulty) if difficulty else None,
        )

    def with_difficulty(self, difficulty: DifficultyAnnotation) -> "ReactionRecord":
        from dataclasses import replace

        return replace(self, difficulty=difficulty)


@dataclass
class RouteNode:
    id: str
    reaction: ReactionRecord | None
    parent: str | None
    children: list[str] = field(default_factory=list)
    layer: int = 0
    total_yield: Decimal = Decimal(1)
    total_duration: Decimal = Decimal(0)
    reaction_label: str = ""
    override: bool = False

    @property
    def is_root(self) -> bool:
        return self.reaction is None

    def product(self) -> Molecule | None:
        return self.reaction.product if self.reaction else None


class DecisionSequence(NamedTuple):
    """One root-to-leaf path: a candidate synthetic route."""

    leaf_id: str
    path: tuple[str, ...]
    steps: int
    total_yield: Decimal
    total_duration: Decimal


class RouteTree:
    """Mutable tree of candidate reactions; one writer at a time."""

    def __init__(self, root_molecule: Molecule):
        self.root_molecule = root_molecule
        self.nodes: dict[str, RouteNode] = {
            ROOT_ID: RouteNode(id=ROOT_ID, reaction=None, parent=None)
        }
        self.comparison_set: list[str] = []
        self._next_id = 1
        self._relabel()

    # --- helpers -------------------------------------------------------------

    def node(self, node_id: str) -> RouteNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise NodeNotFoundError(f"no node with id {node_id!r}") from None

    @property
    def root(self) -> RouteNode:
        return self.nodes[ROOT_ID]

    def _product_of(self, node: RouteNode) -> Molecule:
        if node.is_root:
            return self.root_molecule
        assert node.reaction is not None
        return node.reaction.product

    def _walk_preorder(self) -> Iterator[RouteNode]:
        stack = [ROOT_ID]
        while stack:
            node = self.nodes[stack.pop()]
            yield node
            stack.extend(reversed(node.children))

    def _relabel(self) -> None:
        per_layer: dict[int, int] = {}
        for node in self._walk_preorder():
            ordinal = per_layer.get(node.layer, 0) + 1
            per_layer[node.layer] = ordinal
            node.reaction_label = f"{node.layer}.{ordinal}"

    # --- operations ----------------------------------------------------------

    def add_reaction(
        self,
        parent_id: str,
        reaction: ReactionRecord,
        override: bool = False,
    ) -> str:
        try:
            parent = self.nodes[parent_id]
        except KeyError:
            raise ParentNotFoundError(f"no parent node {parent_id!r}") from None
        parent_product = self._product_of(parent)
        if not override and not chem.same_molecule(reaction.reactant, parent_product):
            raise ReactantMismatchError(
                "reactant does not match the parent product "
                f"({reaction.reactant.smiles_source!r} vs parent "
                f"{parent_product.smiles_source!r}); pass override to accept"
            )
        node_id = f"n{self._next_id}"
        self._next_id += 1
        node = RouteNode(
            id=node_id,
            reaction=reaction,
            parent=parent_id,
            layer=parent.layer + 1,
            total_yield=parent.total_yield * reaction.yield_fraction,
            total_duration=parent.total_duration + reaction.duration_hours,
            override=override,
        )
        self.nodes[node_id] = node
        parent.children.append(node_id)
        self._relabel()
        return node_id

    def remove_subtree(self, node_id: str) -> int:
        node = self.node(node_id)
        if node.is_root:
            raise CannotRemoveRootError("the root cannot be removed")
        doomed: list[str] = []
        stack = [node_id]
        while stack:
            current = stack.pop()
            doomed.append(current)
            stack.extend(self.nodes[current].children)
        assert node.parent is not None
        self.nodes[node.parent].children.remove(node_id)
        for nid in doomed:
            del self.nodes[nid]
        self.comparison_set = [nid for nid in self.comparison_set if nid in self.nodes]
        self._relabel()
        return len(doomed)

    def decision_sequences(self) -> list[DecisionSequence]:
        sequences = []
        for node in self._walk_preorder():
            if node.is_root or node.children:
                continue
            path = []
            cursor: str | None = node.id
            while cursor is not None:
                path.append(cursor)
                cursor = self.nodes[cursor].parent
            sequences.append(
                DecisionSequence(
                    leaf_id=node.id,
                    path=tuple(reversed(path)),
                    steps=node.layer,
                    total_yield=node.total_yield,
                    total_duration=node.total_duration,
                )
            )
        return sequences

    def similarity_marks(self, selected_id: str) -> dict[str, float]:
        selected = self.node(selected_id)
        if selected.is_root:
            raise RootHasNoProductError("the root has no product to compare")
        assert selected.reaction is not None
        selected_fp = chem.fingerprint(selected.reaction.product)
        marks = {}
        for node in self.nodes.values():
            if node.is_root:
                continue
            assert node.reaction is not None
            marks[node.id] = chem.tanimoto(
                selected_fp, chem.fingerprint(node.reaction.product)
            )
        return marks

    def add_to_comparison(self, node_id: str) -> list[str]:
        node = self.node(node_id)
        if node.is_root:
            raise RootHasNoProductError("the root cannot be compared")
        if node_id in self.comparison_set:
            return list(self.comparison_set)
        if len(self.comparison_set) >= MAX_COMPARISON:
            raise ComparisonFullError(
                f"comparison set already holds {MAX_COMPARISON} nodes"
            )
        self.comparison_set.append(node_id)
        return list(self.comparison_set)

    def comparison_matrix(self) -> tuple[list[str], list[str], list[list[float]]]:
        """Rows = comparison nodes, columns = leaf sequences (final products)."""
        sequences = self.decision_sequences()
        leaf_ids = [seq.leaf_id for seq in sequences]
        matrix = []
        for comparison_id in self.comparison_set:
            node = self.nodes[comparison_id]
            assert node.reaction is not None
            row_fp = chem.fingerprint(node.reaction.product)
            row = []
            for leaf_id in leaf_ids:
                leaf = self.nodes[leaf_id]
                assert leaf.reaction is not None
                row.append(chem.tanimoto(row_fp, chem.fingerprint(leaf.reaction.product)))
            matrix.append(row)
        return list(self.comparison_set), leaf_ids, matrix

    # --- integrity -----------------------------------------------------------

    def audit_totals(self) -> list[str]:
        """Recompute every node's totals from its root path; return stale ids."""
        stale = []
        for node in self.nodes.values():
            if node.is_root:
                if node.total_yield != 1 or node.total_duration != 0 or node.layer != 0:
                    stale.append(node.id)
                continue
            yield_product = Decimal(1)
            duration_sum = Decimal(0)
            depth = 0
            cursor: RouteNode | None = node
            while cursor is not None and not cursor.is_root:
                assert cursor.reaction is not None
                yield_product *= cursor.reaction.yield_fraction
                duration_sum += cursor.reaction.duration_hours
                depth += 1
                cursor = self.nodes[cursor.parent] if cursor.parent else None
            if (
                node.total_yield != yield_product
                or node.total_duration != duration_sum
                or node.layer != depth
            ):
                stale.append(node.id)
        return stale

    # --- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "root_molecule": self.root_molecule.smiles_source
            or chem.write_smiles(self.root_molecule),
            "next_id": self._next_id,
            "comparison_set": list(self.comparison_set),
            "nodes": {
                nid: {
                    "id": node.id,
                    "reaction": node.reaction.to_dict() if node.reaction else None,
                    "parent": node.parent,
                    "children": list(node.children),
                    "layer": node.layer,
                    "total_yield": str(node.total_yield),
                    "total_duration": str(node.total_duration),
                    "reaction_label": node.reaction_label,
                    "override": node.override,
                }
                for nid, node in sorted(self.nodes.items())
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RouteTree":
        tree = cls.__new__(cls)
        tree.root_molecule = chem.parse_smiles(data["root_molecule"])
        tree._next_id = data["next_id"]
        tree.comparison_set = list(data["comparison_set"])
        tree.nodes = {}
        for nid, raw in data["nodes"].items():
            reaction = (
                ReactionRecord.from_dict(raw["reaction"]) if raw["reaction"] else None
            )
            tree.nodes[nid] = RouteNode(
                id=raw["id"],
                reaction=reaction,
                parent=raw["parent"],
                children=list(raw["children"]),
                layer=raw["layer"],
                total_yield=Decimal(raw["total_yield"]),
                total_duration=Decimal(raw["total_duration"]),
                reaction_label=raw["reaction_label"],
                override=raw.get("override", False),
            )
        return tree


def new_tree(start: Molecule) -> RouteTree:
    return RouteTree(start)
