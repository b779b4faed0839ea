"""Persian Abstract Meaning Representation toolkit."""
from .__version__ import __version__
