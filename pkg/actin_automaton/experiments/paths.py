from actin_automaton.molgraph.graph import MolecularGraph
from actin_automaton.molgraph.stats import distance_summary, largest_component, shortest_path_between


def longest_path(g: MolecularGraph, workers: int = 1) -> list[int]:
    """
    One diameter path of the largest component, with the same endpoint and
    tie-break choice as compute_stats.
    """
    members, _ = largest_component(g)
    core = g.subgraph(members) if len(members) < g.node_count else g
    summary = distance_summary(core, workers)
    if not summary["pairs"]:
        return [int(members[0])]
    s, t = summary["pair"]
    return members[shortest_path_between(core, s, t)].tolist()
