"""NetworkX-based binary decision trees over boolean variables."""

from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from src.boolean.clauses import Clause, DisjointDNF
from src.utils.exceptions import ContractError


class DecisionTree:
    """
    Binary decision tree stored as a directed arborescence.

    Internal nodes carry `var`, leaves carry `leaf` in {0, 1}; every edge
    carries `branch`, 0 for the low child and 1 for the high child.
    """

    def __init__(self, graph: nx.DiGraph, root: int, num_vars: int):
        self.graph = graph
        self.root = root
        self.num_vars = num_vars
        self._validate()

    def _validate(self) -> None:
        if not nx.is_arborescence(self.graph):
            raise ContractError("Decision tree must be a rooted tree")
        for node, data in self.graph.nodes(data=True):
            children = sorted(self.graph.edges[node, child]["branch"] for child in self.graph.successors(node))
            if "leaf" in data:
                if data["leaf"] not in (0, 1) or children:
                    raise ContractError(f"Leaf {node} must hold 0 or 1 and have no children")
            elif children != [0, 1]:
                raise ContractError(f"Internal node {node} needs exactly one low and one high child")
            elif not 1 <= data.get("var", 0) <= self.num_vars:
                raise ContractError(f"Node {node} tests X{data.get('var')} outside 1..{self.num_vars}")
        for leaf, path in self.paths():
            variables = [v for v, _ in path]
            if len(set(variables)) != len(variables):
                raise ContractError(f"Variable repeated on the path to leaf {leaf}: {variables}")

    @property
    def depth(self) -> int:
        return max(nx.shortest_path_length(self.graph, self.root).values())

    def leaves(self) -> List[int]:
        return [n for n, data in self.graph.nodes(data=True) if "leaf" in data]

    def paths(self) -> List[Tuple[int, List[Tuple[int, bool]]]]:
        """(leaf, [(variable, polarity), ...]) for every root-to-leaf path."""
        result = []
        for leaf in self.leaves():
            nodes = nx.shortest_path(self.graph, self.root, leaf)
            literals = [
                (self.graph.nodes[u]["var"], bool(self.graph.edges[u, v]["branch"]))
                for u, v in zip(nodes, nodes[1:])
            ]
            result.append((leaf, literals))
        return result

    def evaluate(self, x: Sequence[int]) -> int:
        if len(x) != self.num_vars:
            raise ContractError(f"Expected {self.num_vars} values, got {len(x)}")
        node = self.root
        while "leaf" not in self.graph.nodes[node]:
            branch = int(bool(x[self.graph.nodes[node]["var"] - 1]))
            node = next(c for c in self.graph.successors(node) if self.graph.edges[node, c]["branch"] == branch)
        return int(self.graph.nodes[node]["leaf"])


def evaluate_tree(tree: DecisionTree, x: Sequence[int]) -> int:
    return tree.evaluate(x)


def dt_to_ddnf(tree: DecisionTree) -> DisjointDNF:
    """One clause per 1-leaf conjoining its path literals; disjoint because paths exclude each other."""
    clauses = [Clause(tuple(literals)) for leaf, literals in tree.paths() if tree.graph.nodes[leaf]["leaf"] == 1]
    clauses.sort(key=lambda c: c.literals)
    return DisjointDNF(tree.num_vars, tuple(clauses))


def _max_var(node: dict) -> int:
    if "leaf" in node:
        return 0
    return max(int(node["var"]), _max_var(node["low"]), _max_var(node["high"]))


def tree_from_dict(document: dict, num_vars: Optional[int] = None) -> DecisionTree:
    """
    Read a nested {"var": k, "low": node, "high": node} / {"leaf": 0|1} document.

    A wrapper {"num_vars": N, "tree": {...}} is also accepted.
    """
    if not isinstance(document, dict):
        raise ContractError("Decision tree document must be a JSON object")
    if "tree" in document:
        num_vars = document.get("num_vars", num_vars)
        document = document["tree"]

    graph = nx.DiGraph()
    stack = [(document, None, None)]
    try:
        while stack:
            node, parent, branch = stack.pop()
            if not isinstance(node, dict):
                raise ContractError(f"Tree node must be an object, got {node!r}")
            index = graph.number_of_nodes()
            if "leaf" in node:
                graph.add_node(index, leaf=int(node["leaf"]))
            else:
                graph.add_node(index, var=int(node["var"]))
                stack.append((node["high"], index, 1))
                stack.append((node["low"], index, 0))
            if parent is not None:
                graph.add_edge(parent, index, branch=branch)
        inferred = _max_var(document)
    except (KeyError, TypeError, ValueError) as e:
        raise ContractError(f"Malformed decision tree node: {e}") from e

    num_vars = max(inferred, 1) if num_vars is None else int(num_vars)
    return DecisionTree(graph, 0, num_vars)


def tree_to_dict(tree: DecisionTree) -> dict:
    def build(node: int) -> dict:
        data = tree.graph.nodes[node]
        if "leaf" in data:
            return {"leaf": data["leaf"]}
        children: Dict[int, int] = {tree.graph.edges[node, c]["branch"]: c for c in tree.graph.successors(node)}
        return {"var": data["var"], "low": build(children[0]), "high": build(children[1])}

    return {"num_vars": tree.num_vars, "tree": build(tree.root)}
