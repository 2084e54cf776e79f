"""
Script to print all the available calibration studies.

The script iterates over all registered studies and stores the details in a table.
It prints the id of the study, the entry point, the config class and a short description.
"""

from prettytable import PrettyTable

# Import the package to register the studies
from randomization_inference import simlab


def main():
    """Print all studies registered in the `randomization_inference.simlab` sub-package."""
    table = PrettyTable(["S. No.", "Study", "Entry Point", "Config", "Description"])
    table.title = "Available Calibration Studies"
    # set alignment of table columns
    for column in ("Study", "Entry Point", "Config", "Description"):
        table.align[column] = "l"

    for index, study in enumerate(simlab.registry.values()):
        table.add_row([index + 1, study.id, study.entry_point, study.cfg_entry_point.__name__, study.description])

    print(table)


if __name__ == "__main__":
    main()
