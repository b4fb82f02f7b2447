"""netctl: controllability and observability analysis of complex networks.

Submodules:
  graphs        digraph/bipartite primitives, matching, SCCs, cores
  generators    random graph ensembles (ER, configuration model, BA)
  structural    minimum drivers, link/node classes, profiles, actuators
  cavity        ensemble-averaged driver density via generating functions
  exact         eigenvalue-based (PBH) minimum inputs for weighted systems
  energy        controllability Gramians and minimum control energy
  observability sensors, target estimation, dominating sets, observers
  steering      nonlinear steering: entrainment, chaos control, FVS clamping
  collective    synchronizability, pinning control, flocking
  cli           command-line front end
"""

__version__ = "0.1.0"
