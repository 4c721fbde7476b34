"""hamperm: Hamilton circuits via admissible permutation products.

Subpackages/modules:
    graphs   - graph/digraph types, random models, edge-list I/O
    contract - degree-2 subpath detection and 2-vertex contraction
    tour     - pseudo-Hamilton circuits, moves, rotations, abbreviations
    solver   - randomized circuit search for graphs and digraphs
    oracle   - brute force, sigma decomposition, constructive convergence
    problab  - closed-form probabilities and Monte Carlo estimators
    tsp      - weighted-tour local search (good rotations / good sets)
    cli      - command-line interface
"""

__version__ = "0.1.0"
