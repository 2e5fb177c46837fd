"""Write the seeded 200-instance corpus with DW optima to corpus/."""

import sys
from pathlib import Path

from steinerq.dw import dw_solve
from steinerq.stp import corpus, save_stp

out = Path(sys.argv[1] if len(sys.argv) > 1 else "corpus")
out.mkdir(exist_ok=True)
for inst in corpus(seed=0, count=200):
    inst.optimum = dw_solve(inst.graph, inst.terminals).weight
    save_stp(inst, out / f"{inst.name}.stp")
