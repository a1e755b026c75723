"""Run the acceptance suite and print only the verdict lines."""
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    proc = subprocess.run([sys.executable, "-m", "pytest", str(ROOT / "tests" / "test_acceptance.py"), "-q"],
                          cwd=ROOT, capture_output=True, text=True)
    lines = [l for l in proc.stdout.splitlines() if l.startswith(("PASS", "FAIL"))]
    print("\n".join(lines))
    print(f"{sum(l.startswith('PASS') for l in lines)} passed, {sum(l.startswith('FAIL') for l in lines)} failed")
    sys.exit(proc.returncode)
