#!/usr/bin/env python3
"""
Neretin toolkit - complete check script
Runs the unit tests and the acceptance suite end to end
"""

import logging
import os
import subprocess
import sys

# Add parent directory to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

logger = logging.getLogger(__name__)

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def print_header(title):
    """Print a formatted header"""
    print(f"\n{'=' * 60}")
    print(f" {title}")
    print(f"{'=' * 60}")


def print_step(step, description):
    print(f"\n🔹 Step {step}: {description}")
    print("-" * 40)


def check_dependencies():
    """Check if all dependencies are installed"""
    try:
        import dotenv  # noqa: F401
        import sympy  # noqa: F401
        import yaml  # noqa: F401
        logger.info("✅ All required dependencies are installed")
        return True
    except ImportError as e:
        logger.error(f"❌ Missing dependency: {e}")
        print("Run: pip install -r requirements.txt")
        return False


def check_configuration():
    """Load the configuration singleton and report the effective values"""
    try:
        from neretin_toolkit.config import config

        for key, value in sorted(config.as_dict().items()):
            logger.info("   %s = %s", key, value)
        logger.info("✅ Configuration is valid")
        return True
    except Exception as e:
        logger.error(f"❌ Configuration error: {e}")
        return False


def _run(command, what, timeout):
    try:
        result = subprocess.run(command, capture_output=True, text=True, timeout=timeout, cwd=ROOT)
    except subprocess.TimeoutExpired:
        logger.error("❌ %s timed out", what)
        return False
    if result.returncode == 0:
        logger.info("✅ %s passed", what)
        print(result.stdout[-2000:])
        return True
    logger.error("❌ %s failed with code %d", what, result.returncode)
    print(result.stdout[-2000:])
    print(result.stderr[-2000:])
    return False


def run_unit_tests():
    return _run([sys.executable, "-m", "pytest", "-q", "tests"], "Unit tests", 1800)


def run_acceptance(samples):
    return _run([sys.executable, "main.py", "verify", "all", "--samples", str(samples)],
                "Acceptance suite", 3600)


def main():
    """Main check routine"""
    logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')
    print_header("Neretin toolkit - Complete Check")

    steps = [
        ("Checking Dependencies", check_dependencies),
        ("Validating Configuration", check_configuration),
        ("Running Unit Tests", run_unit_tests),
        ("Running Acceptance Suite", lambda: run_acceptance(int(os.getenv('NERETIN_SAMPLES', '1000')))),
    ]
    passed = 0
    for number, (description, step) in enumerate(steps, 1):
        print_step(number, description)
        if step():
            passed += 1

    print_header("Check Results Summary")
    print(f"Steps passed: {passed}/{len(steps)}")
    if passed == len(steps):
        print("🎉 All checks passed.")
    else:
        print("❌ Some checks failed. Please review the output above.")
    return passed == len(steps)


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
