"""The bkernel command line, driven from Python.

Writes an instance, kernelizes it, verifies the result against every
small partner and shows a rejected claim with its counterexample.
"""
import json
import tempfile
from pathlib import Path

from bkernel import bkg
from bkernel.cli import main
from bkernel.graph import AnnotatedBoundariedGraph, Graph
from bkernel.oracle import k2i

work = Path(tempfile.mkdtemp())
src = work / "cycle.bkg"
bkg.write(AnnotatedBoundariedGraph.of(Graph.build(range(9), [(i, (i + 1) % 9) for i in range(9)]), {0, 4}, []), src)

print("$ bkernel kernelize --problem vc-oct --auto-solution --seed 1")
main(["kernelize", "--problem", "vc-oct", "--input", str(src), "--auto-solution", "--seed", "1"])
delta = json.loads((work / "cycle.report.json").read_text())["delta"]

print("\n$ bkernel verify-equivalence")
code = main(["verify-equivalence", "--problem", "vc-oct", "--before", str(src), "--after", str(work / "cycle.kernel.bkg"), "--delta", str(delta)])
print("exit", code)

bkg.write(k2i(2), work / "k22.bkg")
bkg.write(k2i(3), work / "k23.bkg")
print("\n$ bkernel verify-equivalence K_{2,2} vs K_{2,3} with boundary terminals allowed")
code = main(["verify-equivalence", "--problem", "smwc", "--s", "2", "--policy", "any", "--before", str(work / "k22.bkg"), "--after", str(work / "k23.bkg")])
print("exit", code)
