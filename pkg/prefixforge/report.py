"""
Plain-text reports of an exploration output directory.
"""

import os
from typing import List

from .dse import read_manifest, read_scatter


def _table(header: List[str], rows: List[List[str]]) -> List[str]:
    widths = [max(len(row[column]) for row in [header] + rows) for column in range(len(header))]
    lines = ["  ".join(cell.rjust(width) for cell, width in zip(header, widths))]
    lines.append("  ".join("-" * width for width in widths))
    lines.extend("  ".join(cell.rjust(width) for cell, width in zip(row, widths)) for row in rows)
    return lines


def render(directory) -> str:
    """
    Returns the topology summary, the Pareto frontier and the selected candidates of an
    exploration run.

    Raises
    ------
    OutputError
        If the directory holds no readable run.
    """

    manifest = read_manifest(directory)
    points = {row["id"]: row for row in read_scatter(directory)}
    config = manifest["config"]
    counts = manifest["counts"]

    lines = [
        f"width {config['width']}, depth {config['depth']}, fanout {config['fanout']}, "
        f"hybrid {'on' if config['hybrid'] else 'off'}, seed {manifest['seed']}",
        f"{counts['candidates']} candidates from {counts['topologies']} topologies, "
        f"{counts['frontier']} on the frontier, {counts['selected']} selected",
        f"delay spread {100 * manifest['spread']['delay']:.1f}%, "
        f"area spread {100 * manifest['spread']['area']:.1f}%",
        "",
        "topologies",
    ]
    lines.extend(_table(
        ["name", "size", "depth", "fanout"],
        [[entry["name"], str(entry["size"]), str(entry["depth"]), str(entry["max_fanout"])]
         for entry in manifest["topologies"]],
    ))

    lines += ["", "frontier"]
    lines.extend(_table(
        ["id", "area", "delay", "adp", "inv", "ling"],
        [
            [str(point["id"]), str(point["area"]), f"{point['delay']:.3f}",
             f"{point['area'] * point['delay']:.1f}", str(point["n_inverters"]),
             str(point["n_ling"])]
            for point in (points[candidate_id] for candidate_id in manifest["frontier"])
        ],
    ))

    lines += ["", "selected"]
    lines.extend(_table(
        ["rank", "id", "area", "delay", "adp", "provenance"],
        [
            [str(rank), str(entry["id"]), str(entry["area"]), f"{entry['delay']:.3f}",
             f"{entry['adp']:.1f}",
             "{seed}/{mode}/p{variant}/inv{inverters}".format(**entry["provenance"])]
            for rank, entry in enumerate(manifest["selected"], start=1)
        ],
    ))

    if manifest.get("comparisons"):
        lines += ["", "prefix-only against hybrid"]
        lines.extend(_table(
            ["topology", "delay", "hybrid", "change", "area", "hybrid", "change", "adp change"],
            [
                [entry["topology"], f"{entry['prefix']['delay']:.3f}",
                 f"{entry['hybrid']['delay']:.3f}", f"{entry['delay_change_pct']:+.1f}%",
                 str(entry["prefix"]["area"]), str(entry["hybrid"]["area"]),
                 f"{entry['area_change_pct']:+.1f}%", f"{entry['adp_change_pct']:+.1f}%"]
                for entry in manifest["comparisons"]
            ],
        ))
    return os.linesep.join(lines)
