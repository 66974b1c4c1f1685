"""
Generation, technology mapping and design-space exploration of parallel-prefix adders.

`prefixforge` builds an adder in stages, each with its own module:

  - `prefixforge.graph` and `prefixforge.classical` hold prefix graphs and the Kogge-Stone,
    Brent-Kung, Sklansky and Han-Carlson generators.
  - `prefixforge.search` finds minimum-size graphs under depth and fanout bounds, and enumerates
    them with `clingo` to cross-check the result.
  - `prefixforge.ling` converts the critical path into Ling form, `prefixforge.pnetwork` derives
    the propagate network the result needs.
  - `prefixforge.network`, `prefixforge.polarity` and `prefixforge.techmap` lower a graph onto
    inverting library cells, one netlist per way of placing the inverters.
  - `prefixforge.timing` and `prefixforge.sizing` rate netlists in FO1 delays and transistors.
  - `prefixforge.dse` explores all of the above at once and keeps the Pareto frontier.
  - `prefixforge.verify` and `prefixforge.verilog` check netlists against integer addition and
    read and write them as structural Verilog.

## Usage

A 16-bit Kogge-Stone adder, mapped, sized and verified:

```
from prefixforge.classical import make_classical
from prefixforge.network import build_network
from prefixforge.polarity import enumerate_inverter_candidates
from prefixforge.sizing import size_gates
from prefixforge.techmap import map_cells
from prefixforge.verify import check_equiv

graph = make_classical("ks", 16)
network = build_network(graph)
candidates = enumerate_inverter_candidates(network)
netlist = size_gates(map_cells(network, candidates[0]))
check_equiv(netlist).assert_()
```

`check_equiv` returns a verdict with an outcome in the four-valued form `T!`, `T?`, `F!`, `F?`:
exhaustive checks of narrow adders are certain, sampled checks of wide adders are not.

>>> print(check_equiv(netlist).outcome)
T?

The same pipeline is available on the command line:

```
$ prefixforge explore --bits 32 --depth 6 --hybrid --top-k 12 --seed 7 -o out/
$ prefixforge report --in out/
```
"""

__version__ = "0.1.0"
