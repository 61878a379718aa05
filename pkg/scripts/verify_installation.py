"""Verify thomason-lab installation and basic functionality."""

import sys


def main():
    """Verify the thomason-lab installation."""
    print("🔍 thomason-lab Installation Verification")
    print("=" * 50)

    # Check Python version
    print(f"Python version: {sys.version}")

    # Check if we can import the modules
    try:
        from thomason_lab.core.config import LabConfig
        from thomason_lab.core.family import build
        from thomason_lab.core.lollipop import run_thomason
        from thomason_lab.core.words import growth_constant
        from thomason_lab.utils.snapshot import load_canonical_wiring

        print("✅ Core modules imported successfully")
    except ImportError as e:
        print(f"❌ Failed to import core modules: {e}")
        return False

    # Test the wiring snapshot
    try:
        config = LabConfig()
        wiring = load_canonical_wiring(config.snapshot_path)
        print(f"✅ Wiring snapshot loaded: {wiring.name} {wiring.shift}")
    except Exception as e:
        print(f"❌ Wiring snapshot failed: {e}")
        return False

    # Test a small walk
    try:
        instance = build(4, wiring)
        trace = run_thomason(instance)
        print(f"✅ Walk on G_4 finished in {trace.steps} steps")
        print(f"   Rightmost paths: {trace.rightmost_count}")
        print(f"   Ends at C_1: {trace.end_cycle == list(instance.c1.order)}")
    except Exception as e:
        print(f"❌ Walk failed: {e}")
        return False

    # Test the growth constant
    try:
        c, c_sqrt, _, residual = growth_constant()
        print(f"✅ Growth constant c = {c:.6f} (per vertex {c_sqrt:.6f}, residual {residual:.1e})")
    except Exception as e:
        print(f"❌ Growth constant failed: {e}")
        return False

    print("\n" + "=" * 50)
    print("🎉 All basic tests passed! thomason-lab is ready to use.")
    print("\nNext steps:")
    print("1. Run: thomason verify --lemma all")
    print("2. Sweep step counts: thomason sweep --out results/sweep.json")
    print("3. Or see all commands: thomason --help")

    return True


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
