"""
Cones of Influence

Backward (fan-in) and forward (fan-out) reachability over the combinational
view of a Netlist. Cones are sets of net names and always contain their roots.
"""

from typing import Iterable

import networkx as nx

from .bench import Netlist, NetSet


def fanin_cone(netlist: Netlist, roots: Iterable[str]) -> NetSet:
    """
    Every net with a combinational path to a root, roots included.

    Traversal stops at primary inputs and DFF Q nets. A root set gives the
    union of the single-root cones.
    """
    roots = netlist.resolve(roots)
    cone = set(roots)
    for root in roots:
        cone |= nx.ancestors(netlist.graph, root)
    return frozenset(cone)


def fanout_cone(netlist: Netlist, roots: Iterable[str]) -> NetSet:
    """
    Every net reachable from a root through combinational gates, roots included.

    Traversal does not cross flip-flops; a primary output that also feeds other
    gates is traversed like any internal net.
    """
    roots = netlist.resolve(roots)
    cone = set(roots)
    for root in roots:
        cone |= nx.descendants(netlist.graph, root)
    return frozenset(cone)
