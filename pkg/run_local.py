"""
Local smoke run for GridWalk.
Builds the reference walks, recounts the small-grid goldens and recomputes
the discrepancy ledger, then prints a JSON summary.
"""

import json
import os
import sys
import time
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

# Load environment variables
from dotenv import load_dotenv
load_dotenv()

from src.constructor import ConstructionRequest, WalkConstructor
from src.enumerator import EnumerationQuery, WalkEnumerator
from src.existence import KNOWN_DISCREPANCIES, current_ledger, pairs_report
from src.grid_core import Cell, Direction, GridSpec, MoveSet
from src.rectifiable import path_length, polyline_of_walk

settings = {
    'GRIDWALK_ROOK_MAX_N': '6',
    'GRIDWALK_KING_MAX_N': '5',
    'GRIDWALK_WORKERS': '1',
    'GRIDWALK_BASE_SIDE': '5',
}

print("🔍 Active settings...\n")
for var, default in settings.items():
    value = os.getenv(var)
    print(f"✅ {var}: {value if value else default + ' (default)'}")
print()

constructor = WalkConstructor()
enumerator = WalkEnumerator()


def check(name, expected, actual):
    ok = expected == actual
    print(f"{'✅' if ok else '❌'} {name}: expected {expected}, got {actual}")
    return {'check': name, 'expected': expected, 'actual': actual, 'ok': ok}


try:
    print("🚀 Running GridWalk smoke checks...\n")
    started = time.time()
    results = []

    walk = constructor.serpentine(GridSpec(8))
    results.append(check('serpentine 8x8 length', 63.0, path_length(polyline_of_walk(walk))))

    walk = constructor.construct_from(ConstructionRequest(GridSpec(4), Cell(2, 3), Direction.N))
    results.append(check('4x4 walk from (2,3) heading N', 15, walk.steps))

    walk = constructor.construct_between(ConstructionRequest(GridSpec(10), Cell(6, 3), target=Cell(6, 4)))
    results.append(check('10x10 walk (6,3) -> (6,4)', 99, walk.steps if walk else None))

    results.append(check('4x4 rook total', 552, enumerator.total_max_walk_count(GridSpec(4))))
    results.append(check('3x3 king total', 784, enumerator.total_max_walk_count(GridSpec(3, MoveSet.KING))))

    result = enumerator.longest_between(GridSpec(4), Cell(2, 2), Cell(2, 4))
    results.append(check('4x4 (2,2) -> (2,4)', [14, 10], [result.max_steps, result.count_max_walks]))

    result = enumerator.run(EnumerationQuery(GridSpec(5), Cell(1, 1), Cell(4, 4), prune=True))
    results.append(check('5x5 (1,1) -> (4,4)', [24, 104], [result.max_steps, result.count_max_walks]))

    report = pairs_report(4)
    results.append(check('4x4 pair count', [24, 16], [report['formula'], report['claimed_yes']]))

    ledger = current_ledger(enumerator)
    results.append(check('discrepancy ledger', len(KNOWN_DISCREPANCIES),
                         len(ledger) if ledger == KNOWN_DISCREPANCIES else -1))

    summary = {
        'success': all(r['ok'] for r in results),
        'checks': results,
        'duration_seconds': time.time() - started,
    }

    print("\n" + "="*60)
    print("📊 SMOKE RUN RESULTS")
    print("="*60)
    print(json.dumps(summary, indent=2, default=str))
    print("="*60 + "\n")

    if summary['success']:
        print(f"✅ All {len(results)} checks passed in {summary['duration_seconds']:.2f} seconds")
    else:
        print("❌ Some checks failed!")
        sys.exit(1)

except Exception as e:
    print(f"\n❌ Error running smoke checks: {str(e)}")
    import traceback
    traceback.print_exc()
    sys.exit(1)
