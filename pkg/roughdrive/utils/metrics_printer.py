"""
Metrics Printer - Displays run configuration, experiment results and run summary
"""
import math
from datetime import datetime
from typing import Any


class MetricsPrinter:
    """Prints run reports to console"""

    @staticmethod
    def print_separator(char="=", length=80):
        """Print a separator line"""
        print(char * length)

    @staticmethod
    def print_header(title: str):
        """Print a formatted header"""
        MetricsPrinter.print_separator()
        print(f"  {title}")
        print(f"  Timestamp: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
        MetricsPrinter.print_separator()

    @staticmethod
    def print_section(title: str):
        """Print a section title"""
        print(f"\n{'─' * 80}")
        print(f"  {title}")
        print(f"{'─' * 80}")

    @staticmethod
    def print_metric(name: str, value: Any, unit: str = ""):
        """Print a single metric"""
        if isinstance(value, float):
            value = f"{value:.6g}" if math.isfinite(value) else "n/a"
        value_str = f"{value} {unit}".strip() if unit else str(value)
        print(f"  • {name:<40} : {value_str}")

    @staticmethod
    def print_params(params):
        """Print derived model constants"""
        MetricsPrinter.print_section("📐 Model Parameters")
        for name, value in params.as_dict().items():
            MetricsPrinter.print_metric(name, value)

    @staticmethod
    def print_experiment(result):
        """Print one experiment outcome with its headline numbers"""
        status = "✅ PASS" if result.passed else "❌ FAIL"
        MetricsPrinter.print_section(f"{status}  {result.name}")
        MetricsPrinter.print_metric("Wall Clock", round(result.seconds, 3), "s")
        if result.error:
            MetricsPrinter.print_metric("Error", result.error)
        for label, report in result.reports:
            record = report.as_record()
            print(f"\n  [{label}]")
            for key in ('slope', 'slope_se', 'reference_slope', 'raw_slope', 'degenerate',
                        'exceed_probs', 'empirical_var', 'continuum_var', 'matrix_max_excess',
                        'bifbm_residual', 'trace_residual', 'quadrature_residual',
                        'mass_error', 'l2_relative_error', 'peak_error', 'chapman_kolmogorov_error',
                        'max_residuals', 'sup_second', 'relative_changes'):
                if key in record and record[key] is not None:
                    MetricsPrinter.print_metric(key, record[key])
        for path in result.artifacts:
            print(f"    └─ {path}")

    @staticmethod
    def print_run_summary(manifest):
        """Print the run summary"""
        MetricsPrinter.print_section("⚡ Run Summary")
        MetricsPrinter.print_metric("Config Hash", manifest.config_hash)
        MetricsPrinter.print_metric("Seed", manifest.config.get('seed'))
        MetricsPrinter.print_metric("Replicas", manifest.config.get('n_replicas'))
        passed = sum(r.passed for r in manifest.results)
        MetricsPrinter.print_metric("Experiments Passed", f"{passed}/{len(manifest.results)}")
        MetricsPrinter.print_metric("Total Run Time", round(manifest.wall_clock_seconds, 2), "s")
        MetricsPrinter.print_metric("Memory Usage (RSS)", manifest.system.get('memory_rss_mb', 0), "MB")
        MetricsPrinter.print_metric("Artifacts Written", len(manifest.artifacts))
        MetricsPrinter.print_separator()
        print("✅ All experiments passed" if manifest.passed else "❌ Some experiments failed")
        MetricsPrinter.print_separator()
        print()
