#!/usr/bin/env python3
"""
Pre-publication checker for comonoid-lab.
Compiles every module of the package and the scripts, imports each package
module and reads the dependency manifest.
"""

import importlib
import py_compile
import sys
from pathlib import Path

# Configuration
ROOT = Path(__file__).resolve().parent.parent
PACKAGE = "comonoid"
SOURCE_DIRS = (PACKAGE, f"{PACKAGE}/i18n", "scripts")
THIRD_PARTY = (("numpy", "arrays for crosswords and preorders"), ("pytest", "test runner"))


def python_files(root=ROOT):
    for directory in SOURCE_DIRS:
        yield from sorted((root / directory).glob("*.py"))


def check_syntax(root=ROOT):
    """Compile every source file; return the ones that fail"""
    print("🔍 Checking Python syntax...")
    errors = []
    for file_path in python_files(root):
        try:
            py_compile.compile(str(file_path), doraise=True)
            print(f"✅ {file_path.relative_to(root)}")
        except py_compile.PyCompileError as e:
            print(f"❌ {file_path.relative_to(root)}: {e}")
            errors.append(str(file_path.relative_to(root)))
    return errors


def package_modules(root=ROOT):
    modules = []
    for file_path in sorted((root / PACKAGE).rglob("*.py")):
        parts = file_path.relative_to(root).with_suffix("").parts
        if parts[-1] == "__init__":
            parts = parts[:-1]
        modules.append(".".join(parts))
    return modules


def check_imports(root=ROOT):
    """Import third-party dependencies and every package module"""
    print("\n🔍 Checking imports...")
    if str(root) not in sys.path:
        sys.path.insert(0, str(root))
    targets = list(THIRD_PARTY) + [(module, "package module") for module in package_modules(root)]
    errors = []
    for module, description in targets:
        try:
            importlib.import_module(module)
            print(f"✅ {module} ({description})")
        except ImportError as e:
            print(f"❌ {module} ({description}): {e}")
            errors.append(module)
    return errors


def read_requirements(root=ROOT):
    """Requirement lines of requirements.txt, or None when it is missing"""
    req_file = root / "requirements.txt"
    if not req_file.exists():
        return None
    lines = req_file.read_text(encoding="utf-8").splitlines()
    return [line.strip() for line in lines if line.strip() and not line.strip().startswith("#")]


def check_requirements(root=ROOT):
    """Check requirements.txt exists and declares every third-party import"""
    print("\n🔍 Checking requirements.txt...")
    requirements = read_requirements(root)
    if requirements is None:
        print("❌ requirements.txt not found")
        return False
    print(f"✅ requirements.txt ({len(requirements)} dependencies)")
    for req in requirements:
        print(f"   • {req}")
    declared = {req.split(">")[0].split("=")[0].split("<")[0].strip().lower() for req in requirements}
    undeclared = [module for module, _ in THIRD_PARTY if module not in declared]
    if undeclared:
        print(f"❌ Not declared: {', '.join(undeclared)}")
        return False
    return True


def main():
    """Run all pre-publication checks"""
    print("🚀 comonoid-lab - Pre-publication Check")
    print("=" * 50)

    syntax_errors = check_syntax()
    import_errors = check_imports()
    requirements_ok = check_requirements()

    print("\n" + "=" * 50)
    print("📊 SUMMARY")

    total_errors = len(syntax_errors) + len(import_errors) + (0 if requirements_ok else 1)
    if total_errors == 0:
        print("✅ ALL CHECKS PASSED")
        sys.exit(0)

    print(f"❌ {total_errors} issue(s) found:")
    if syntax_errors:
        print(f"   • Syntax errors in: {', '.join(syntax_errors)}")
    if import_errors:
        print(f"   • Import errors: {', '.join(import_errors)}")
    if not requirements_ok:
        print("   • Requirements file issue")
    sys.exit(1)


if __name__ == "__main__":
    main()
