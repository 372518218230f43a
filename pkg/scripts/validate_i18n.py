#!/usr/bin/env python3
"""
Checks that every language catalog under comonoid/i18n carries exactly the
keys of the English catalog, and that no message uses more placeholders than
its English counterpart.
"""

import argparse
import json
import string
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Set, Tuple

# Configuration
REFERENCE_LANGUAGE = "en"
DEFAULT_I18N_DIR = Path(__file__).resolve().parent.parent / "comonoid" / "i18n"


@dataclass
class CatalogReport:
    """Comparison of one language's catalog with the reference catalog"""

    language: str
    catalog: str
    status: str
    keys_count: int = 0
    missing: List[str] = field(default_factory=list)
    extra: List[str] = field(default_factory=list)
    placeholders: List[str] = field(default_factory=list)

    @property
    def ok(self):
        return self.status in ("reference", "valid")


def get_all_keys(data: Dict, prefix: str = "") -> Set[str]:
    """
    Recursively get all keys from nested dictionary.

    Args:
        data: Dictionary to extract keys from
        prefix: Current key prefix for nested keys

    Returns:
        Set of all keys (including nested keys with dot notation)
    """
    keys = set()
    for key, value in data.items():
        full_key = f"{prefix}.{key}" if prefix else key
        keys.add(full_key)
        if isinstance(value, dict):
            keys.update(get_all_keys(value, full_key))
    return keys


def placeholder_count(message) -> int:
    """Number of replacement fields a str.format message consumes"""
    if not isinstance(message, str):
        return 0
    fields = [name for _, name, _, _ in string.Formatter().parse(message) if name is not None]
    numbered = [int(name) for name in fields if name.isdigit()]
    return max(numbered) + 1 if numbered else len(fields)


def load_json_file(file_path: Path) -> Tuple[Dict, List[str]]:
    """
    Load JSON file and return data with any errors.

    Returns:
        Tuple of (data, errors)
    """
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            return json.load(f), []
    except json.JSONDecodeError as e:
        return {}, [f"Invalid JSON in {file_path}: {e}"]
    except FileNotFoundError:
        return {}, [f"File not found: {file_path}"]


def compare_catalog(reference: Dict, language: str, catalog: str, lang_file: Path) -> Tuple[CatalogReport, List[str]]:
    if not lang_file.exists():
        return CatalogReport(language, catalog, "missing_file"), [f"Missing file: {lang_file}"]
    data, errors = load_json_file(lang_file)
    if errors:
        return CatalogReport(language, catalog, "invalid_json"), errors

    ref_keys = get_all_keys(reference)
    keys = get_all_keys(data)
    report = CatalogReport(language, catalog, "valid", len(keys), sorted(ref_keys - keys), sorted(keys - ref_keys))
    report.placeholders = sorted(
        key for key in ref_keys & keys
        if key in data and placeholder_count(data[key]) > placeholder_count(reference[key])
    )
    problems = []
    if report.missing:
        problems.append(f"{language}/{catalog} missing keys: {report.missing}")
    if report.extra:
        problems.append(f"{language}/{catalog} has extra keys: {report.extra}")
    if report.placeholders:
        problems.append(f"{language}/{catalog} uses extra placeholders in: {report.placeholders}")
    if problems:
        report.status = "invalid"
    return report, problems


def collect_reports(i18n_dir: Path) -> Tuple[List[CatalogReport], List[str]]:
    """Compare every catalog of every language with the reference language"""
    ref_dir = i18n_dir / REFERENCE_LANGUAGE
    if not ref_dir.is_dir():
        return [], [f"Reference directory '{REFERENCE_LANGUAGE}' not found in {i18n_dir}"]
    catalogs = sorted(f.name for f in ref_dir.glob("*.json"))
    if not catalogs:
        return [], [f"No JSON files found in {ref_dir}"]
    languages = sorted(d.name for d in i18n_dir.iterdir() if d.is_dir() and not d.name.startswith("__"))

    reports, errors = [], []
    for catalog in catalogs:
        reference, ref_errors = load_json_file(ref_dir / catalog)
        if ref_errors:
            errors.extend(ref_errors)
            continue
        for language in languages:
            if language == REFERENCE_LANGUAGE:
                reports.append(CatalogReport(language, catalog, "reference", len(get_all_keys(reference))))
                continue
            report, problems = compare_catalog(reference, language, catalog, i18n_dir / language / catalog)
            reports.append(report)
            errors.extend(problems)
    return reports, errors


def validate_i18n_files(i18n_dir: Path = None) -> bool:
    """
    Validate all i18n files have consistent keys.

    Args:
        i18n_dir: Path to i18n directory (defaults to comonoid/i18n)

    Returns:
        True if validation passes, False otherwise
    """
    i18n_dir = Path(i18n_dir) if i18n_dir is not None else DEFAULT_I18N_DIR
    if not i18n_dir.exists():
        print(f"❌ I18n directory not found: {i18n_dir}")
        return False

    reports, errors = collect_reports(i18n_dir)

    print("=" * 60)
    print("📊 VALIDATION SUMMARY")
    print("=" * 60)
    for report in reports:
        icon = {"reference": "🔵", "valid": "✅", "invalid": "❌", "missing_file": "📁", "invalid_json": "🔧"}.get(report.status, "❓")
        print(f"  {icon} {report.language}/{report.catalog}: {report.keys_count} keys")

    if errors:
        print(f"\n🚨 Found {len(errors)} validation errors:")
        for error in errors:
            print(f"  ❌ {error}")
        return False
    print("\n🎉 All i18n files have consistent keys!")
    return True


def main():
    """Main entry point"""
    parser = argparse.ArgumentParser(description="Validate i18n JSON catalogs")
    parser.add_argument("--i18n-dir", type=Path, help="Path to i18n directory (default: comonoid/i18n)")
    args = parser.parse_args()
    sys.exit(0 if validate_i18n_files(args.i18n_dir) else 1)


if __name__ == "__main__":
    main()
