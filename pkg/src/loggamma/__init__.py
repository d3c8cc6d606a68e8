"""Log-gamma directed polymer: free energies, large-deviation rates and exact simulations."""
from .cli import main
