"""
DOT rendering of the 1-skeleton of a polygraph.

0-generators become nodes and 1-generators edges; higher generators are
listed as comments with their boundaries.
"""

import json

from precat.cells import Polygraph
from precat.oracle import cell_text


def _quote(text: str) -> str:
    return json.dumps(text, ensure_ascii=False)


def polygraph_to_dot(P: Polygraph, name: str = "polygraph") -> str:
    lines = [f"digraph {_quote(name)} {{"]
    for gen in P.generators(0):
        lines.append(f"  {_quote(gen.name)};")
    for gen in P.generators(1):
        src = gen.src.body.gen.name
        tgt = gen.tgt.body.gen.name
        lines.append(f"  {_quote(src)} -> {_quote(tgt)} [label={_quote(gen.name)}];")
    for k in range(2, P.dim + 1):
        for gen in P.generators(k):
            lines.append(f"  // {k}: {gen.name} : {cell_text(P, gen.src)} => {cell_text(P, gen.tgt)}")
    lines.append("}")
    return "\n".join(lines) + "\n"
