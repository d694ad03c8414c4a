"""Version stamp written into every output file."""
import logging
import subprocess
from pathlib import Path

from app import __version__

logger = logging.getLogger(__name__)

REPO_ROOT = Path(__file__).resolve().parents[2]


def version_stamp() -> str:
    """`git describe --always --dirty --tags`, or the package version when git is unavailable."""
    try:
        completed = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            cwd=REPO_ROOT,
            capture_output=True,
            text=True,
            timeout=5,
            check=True,
        )
    except (OSError, subprocess.SubprocessError):
        logger.debug("git describe unavailable, using package version")
        return f"{__version__}+unknown"
    described = completed.stdout.strip()
    return described or f"{__version__}+unknown"
