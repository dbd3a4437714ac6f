"""Run a command and require a specific exit code: expect_exit.py CODE CMD..."""
import subprocess
import sys

want = int(sys.argv[1])
got = subprocess.run(sys.argv[2:]).returncode
if got != want:
    sys.exit(f"exit code {got}, expected {want}: {' '.join(sys.argv[2:])}")
