"""spheremix: discrepancy convergence of the drunkard's walk on the sphere."""

__version__ = "0.3.0"
