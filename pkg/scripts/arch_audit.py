#!/usr/bin/env python3
"""Architecture compliance audit.

Ensures:
1. Domain purity - app/domain imports no pydantic, argparse or scipy and
   nothing from the outer layers
2. Oracle isolation - production code never imports app.analytics, and the
   oracles depend on the domain only
3. Layer direction - infrastructure never imports application or cli
4. scipy stays a test-only dependency

Run: python scripts/arch_audit.py
Exit code: 0 = pass, 1 = violations found
"""
import ast
import sys
from pathlib import Path


class ImportViolationChecker:
    """Check for architecture violations in Python files."""

    # Forbidden third-party imports by package
    FORBIDDEN_IMPORTS = {
        "app.domain": ["pydantic", "pydantic_settings", "argparse", "scipy", "dotenv"],
        "app.analytics": ["scipy", "pydantic"],
        "app.application": ["scipy", "argparse"],
        "app.infrastructure": ["scipy", "argparse"],
        "app.cli": ["scipy"],
    }

    # Forbidden cross-layer imports
    CROSS_MODULE_VIOLATIONS = {
        "app.domain": ["app.analytics", "app.application", "app.infrastructure", "app.cli"],
        "app.analytics": ["app.application", "app.infrastructure", "app.cli"],
        "app.application": ["app.analytics", "app.cli"],
        "app.infrastructure": ["app.analytics", "app.application", "app.cli"],
        "app.cli": ["app.analytics"],
    }

    def __init__(self, project_root: Path):
        self.violations = []
        self.project_root = project_root

    def module_name(self, filepath: Path) -> str:
        relative = filepath.relative_to(self.project_root).with_suffix("")
        return ".".join(relative.parts)

    def check_file(self, filepath: Path):
        """Check a Python file for import violations."""
        try:
            tree = ast.parse(filepath.read_text(encoding="utf-8"))
        except SyntaxError as e:
            self.violations.append(f"Syntax error in {filepath}: {e}")
            return

        module = self.module_name(filepath)
        for node in ast.walk(tree):
            if isinstance(node, ast.Import):
                for alias in node.names:
                    self._check_import(module, alias.name, filepath)
            elif isinstance(node, ast.ImportFrom) and node.module and node.level == 0:
                self._check_import(module, node.module, filepath)

    @staticmethod
    def _within(name: str, package: str) -> bool:
        return name == package or name.startswith(package + ".")

    def _check_import(self, module: str, import_name: str, filepath: Path):
        for package, forbidden in self.FORBIDDEN_IMPORTS.items():
            if self._within(module, package):
                for name in forbidden:
                    if self._within(import_name, name):
                        self.violations.append(
                            f"PURITY VIOLATION in {module}:\n"
                            f"  imports {import_name}\n"
                            f"  Location: {filepath}"
                        )

        for package, targets in self.CROSS_MODULE_VIOLATIONS.items():
            if self._within(module, package):
                for target in targets:
                    if self._within(import_name, target):
                        self.violations.append(
                            f"ISOLATION VIOLATION in {module}:\n"
                            f"  Cannot import from {target}\n"
                            f"  Location: {filepath}"
                        )

    def check_directory(self, directory: Path):
        """Recursively check all Python files in a directory."""
        for py_file in sorted(directory.rglob("*.py")):
            if "__pycache__" in py_file.parts:
                continue
            self.check_file(py_file)

    def report(self):
        """Print audit report and return exit code."""
        if not self.violations:
            print("✓ Architecture audit PASSED")
            print("  - Domain purity verified")
            print("  - Oracle isolation verified")
            print("  - Layer direction verified")
            return 0

        print("✗ Architecture audit FAILED\n")
        for violation in self.violations:
            print(f"  {violation}\n")

        print(f"\nTotal violations: {len(self.violations)}")
        return 1


def main():
    """Run full architecture audit."""
    print("=" * 70)
    print("ARCHITECTURE COMPLIANCE AUDIT")
    print("=" * 70)

    project_root = Path(__file__).resolve().parent.parent
    app_dir = project_root / "app"
    if not app_dir.exists():
        print(f"Error: {app_dir} not found")
        return 1

    checker = ImportViolationChecker(project_root)
    checker.check_directory(app_dir)
    result = checker.report()
    print("=" * 70)
    return result


if __name__ == "__main__":
    sys.exit(main())
