"""Principal eigenvalues of subgraphs of Hamming graphs and their role in
mutational robustness."""

__version__ = "0.1.0"
