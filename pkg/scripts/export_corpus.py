"""Write the bundled corpora as JSON instance documents under corpus/.

corpus/rings, corpus/cstar and corpus/groupoids are coherence workspaces;
corpus/instances holds single instances for the morita and rep-check commands;
corpus/negative holds fixtures that must fail validation.
"""
from __future__ import annotations

import argparse
import re
import shutil
from pathlib import Path

from morita.corpus import (bibundle_pool, column_module, groupoid_corpus, multimatrix_algebra,
                           multimatrix_corpus, ring_algebras, ring_coherence_pool, row_module,
                           unit_bimodule)
from morita.groupoid import (functor_to_bibundle, pair_groupoid, point_groupoid, GroupoidFunctor,
                             unit_bibundle)
from morita.groupoid_morita import enumerate_actions, morita_decide
from morita.multimatrix import MultimatrixAlgebra, MultiplicityBimodule, unit_correspondence
from morita.serialize import InstanceDocument, document_for, save_document


def slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.+-]+", "_", name).strip("_") or "instance"


def write(directory: Path, obj, name: str) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    save_document(document_for(obj, name), directory / f"{slug(name)}.json")


def ring_workspace(root: Path) -> None:
    for i, cell in enumerate(ring_coherence_pool(2)):
        write(root / "rings", cell, f"{i:02d}-{cell.name or 'cell'}")


def cstar_workspace(root: Path) -> None:
    cells = multimatrix_corpus() + [unit_correspondence(multimatrix_algebra(k)) for k in (1, 2, 3)]
    for i, cell in enumerate(cells):
        label = "x".join(map(str, cell.left.blocks)) + "-" + "x".join(map(str, cell.right.blocks))
        entries = "".join(str(v) for v in cell.mult.flat)
        write(root / "cstar", cell, f"{i:02d}-{cell.name or label + '-' + entries}")


def groupoid_workspace(root: Path) -> None:
    for i, cell in enumerate(bibundle_pool()):
        write(root / "groupoids", cell, f"{i:02d}-{cell.name or cell.G.name + '-' + cell.H.name}")


def instances(root: Path) -> None:
    out = root / "instances"
    for n in (2, 3):
        for p in (2, 3):
            write(out, column_module(n, p), f"column-M{n}-F{p}")
    write(out, row_module(2, 2), "row-M2-F2")
    write(out, unit_bimodule(ring_algebras(2)["M2(F2)"]), "unit-M2-F2")
    write(out, ring_algebras(2)["T2(F2)"], "T2-F2")
    one, two = MultimatrixAlgebra((1,)), MultimatrixAlgebra((1, 1))
    write(out, MultiplicityBimodule(one, two, [[1, 1]]), "E-1x2-ones")
    write(out, MultiplicityBimodule(multimatrix_algebra(2), multimatrix_algebra(2),
                                    [[0, 1], [1, 0]]), "E-swap")
    write(out, MultiplicityBimodule(MultimatrixAlgebra((2,)), one, [[1]]), "E-M2-C")
    groupoids = {g.name: g for g in groupoid_corpus()}
    for name, g in groupoids.items():
        write(out, g, f"groupoid-{name}")
    for n in (3, 4):
        write(out, pair_groupoid(n), f"groupoid-P{n}")
    p2, pt = pair_groupoid(2), point_groupoid()
    write(out, morita_decide(p2, pt).certificate, "bibundle-P2-pt")
    write(out, unit_bibundle(p2), "bibundle-unit-P2")
    collapse = GroupoidFunctor(p2, pt, [0, 0], [0] * p2.n_arrows)
    write(out, collapse, "functor-P2-pt")
    write(out, functor_to_bibundle(collapse), "bibundle-functor-P2-pt")
    write(out, enumerate_actions(p2, 2)[-1], "action-P2")


def negative(root: Path) -> None:
    out = root / "negative"
    out.mkdir(parents=True, exist_ok=True)
    # basis 1, a, b over F_2 with ab = a and every other product of a, b zero: (ab)b != a(bb)
    sc = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for i in range(3):
        sc[0][i][i] = sc[i][0][i] = 1
    sc[1][2][1] = 1
    doc = InstanceDocument("algebra", "non-associative", {"p": 2, "structure_constants": sc,
                                                           "unit": [1, 0, 0]})
    save_document(doc, out / "non-associative.json")
    (out / "malformed.json").write_text('{"kind": "groupoid",\n  "name": "broken",\n'
                                        '  "payload": {"objects": ["a"],,}\n}\n',
                                        encoding="utf-8")
    g = document_for(pair_groupoid(2), "bad-inverse")
    first = g.payload["arrows"][1]
    g.payload["inverse"][first] = first
    save_document(g, out / "bad-inverse.json")


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--root", default=Path(__file__).resolve().parent.parent / "corpus", type=Path)
    args = ap.parse_args(argv)
    if args.root.exists():
        shutil.rmtree(args.root)
    for step in (ring_workspace, cstar_workspace, groupoid_workspace, instances, negative):
        step(args.root)
    count = sum(1 for _ in args.root.rglob("*.json"))
    print(f"wrote {count} documents under {args.root}")


if __name__ == "__main__":
    main()
