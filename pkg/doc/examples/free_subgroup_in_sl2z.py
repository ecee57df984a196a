# This example decomposes the subgroup H = <sr> of SL(2, Z) = Z4 *_{Z2} Z6
# and runs the quasiconvexity laboratory on it.
#
# H acts freely on the Bass-Serre tree, so the quotient graph of groups is a
# single edge with trivial vertex groups plus one loop:
#
#   A1 ----- A-1
#    \______/
#       y
#

# First let's import what we need

from pathlib import Path

from amalgamkit import catalog
from amalgamkit.bass_serre.domain import FundamentalDomain, compute_fundamental_domain
from amalgamkit.bass_serre.graph import induced_graph_of_groups
from amalgamkit.bass_serre.laws import verify_domain_laws
from amalgamkit.constants import DEFAULT_BUDGETS
from amalgamkit.metrics.report import write_report
from amalgamkit.metrics.verdict import quasiconvexity_verdict
from amalgamkit.rewriting.proposition_a import proposition_a_transform
from amalgamkit.rewriting.sequences import h_reduced_sequence

# Load the presentation from the catalog. The same group can be read from
# sl2z.amalgam next to this file with fileformat.parse_presentation.
P = catalog.get("sl2z").load()
print(P.render("sssrrrr"))

# Find a fundamental domain for H. With the default budgets the search is
# certified; smaller budgets may give an Inconclusive result instead.
D = compute_fundamental_domain(P, ["sr"], DEFAULT_BUDGETS)
assert isinstance(D, FundamentalDomain)

# The induced graph of groups and the law report
B = induced_graph_of_groups(D)
print("\n".join(B.describe()))
print("\n".join(verify_domain_laws(D).lines()))

# Rewrite the square of the stable letter into a reduced form of G
y = D.stable_letters[0]
sequence = h_reduced_sequence(B, [(y, 1), (y, 1)])
print("\n".join(proposition_a_transform(B, sequence).lines()))

# Distortion profile and verdict, written as csv and json to /tmp
report = quasiconvexity_verdict(P, ["sr"], DEFAULT_BUDGETS, seed=1)
for path in write_report(P, report, Path("/tmp")):
    print(path)
