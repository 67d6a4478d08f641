"""
Corpus initialization script.
Run this script to write the worked-example fixtures into the corpus directory.
"""
import argparse
import sys
from typing import List, Optional

from corpus_manager import CorpusManager


def main(argv: Optional[List[str]] = None) -> int:
    """Write the default fixtures and report the corpus state."""
    parser = argparse.ArgumentParser(description="Write the worked-example fixtures.")
    parser.add_argument("--corpus-dir", help="Target directory (defaults to BALLSPACE_CORPUS_DIR or ./corpus)")
    parser.add_argument("--force", action="store_true", help="Overwrite fixtures that already exist")
    args = parser.parse_args(argv)

    print("=" * 60)
    print("Fixture Corpus Initialization")
    print("=" * 60)
    print()

    corpus = CorpusManager(args.corpus_dir)

    print("Checking corpus health...")
    health = corpus.check_corpus_health()
    if health["status"] == "healthy" and not health["warnings"]:
        print(f"OK: Corpus is healthy with {health['fixture_count']} fixtures.")
        if not args.force:
            print("Nothing to write. Use --force to rewrite every fixture.")
            return 0
    else:
        print("WARNING: Corpus is empty or has issues.")
        for warning in health["warnings"]:
            print(f"   - {warning}")

    print("\nWriting fixtures...")
    results = corpus.write_default_fixtures(force=args.force)

    print("\n" + "=" * 60)
    print("Write Results")
    print("=" * 60)
    print(f"SUCCESS: Wrote {results['written']} fixtures")
    print(f"Skipped: {results['skipped']} existing fixtures")
    print(f"FAILED: {results['failed']} fixtures")

    if results["errors"]:
        print(f"\nWARNINGS: Errors ({len(results['errors'])}):")
        for error in results["errors"][:10]:
            print(f"   - {error}")
        if len(results["errors"]) > 10:
            print(f"   ... and {len(results['errors']) - 10} more errors")

    print("\n" + "=" * 60)
    print("Corpus Statistics")
    print("=" * 60)
    stats = corpus.get_corpus_stats()
    print(f"Directory: {stats['corpus_directory']}")
    print(f"Fixtures: {stats['fixture_count']}")
    for kind, count in stats["kinds"].items():
        print(f"  {kind}: {count}")

    if results["failed"]:
        return 1
    print("\nSUCCESS: Corpus initialization complete!")
    return 0


if __name__ == "__main__":
    sys.exit(main())
