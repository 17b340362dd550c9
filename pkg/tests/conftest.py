import sys
from pathlib import Path

# tests import the shared corpus module directly
sys.path.insert(0, str(Path(__file__).parent))
