# # Fuzzy ages
#
# A scalar range splits a number into named terms. Values near a boundary
# belong partly to both neighbours.

import numpy as np

from pkn import KnowledgeGraph
from pkn.fuzzy import apply_modifier, build_range, defuzzify, fuzzify, fuzzify_many

AGES = """\
range of age is infant, child, adult for person
age of infant is 0, 4 for person
age of child is 5, 17 for person
age of adult is 18, age-at-death for person
"""

graph = KnowledgeGraph.from_text(AGES)
age = build_range(graph, "age", "person")
print(age.boundaries, age.half_widths)

# ## Memberships around a boundary

for value in (3, 4.3, 4.5, 4.7, 10, 17.5, 40):
    print(value, fuzzify(age, value))

# ## Back to a number
#
# Defuzzification takes the membership-weighted mean of term midpoints.

print(defuzzify(age, fuzzify(age, 10)))
print(defuzzify(age, (0.5, 0.5, 0)))

sweep = np.array([2, 4.4, 4.6, 11, 17, 17.5, 18, 60])
print(np.round(fuzzify_many(age, sweep), 3))

# ## Modifiers
#
# Without a definition in the graph, `very` squares the membership.

lifespan = KnowledgeGraph.from_text(
    "range of age is young, old for person\n"
    "age of young is 0, 40 for person\nage of old is 41, age-at-death for person")
life = build_range(lifespan, "age", "person")
for value in (38, 41, 43, 90):
    print(value, apply_modifier("very", life, "old", value))

# A graph definition wins over the default hedge.

defined = lifespan.extend(KnowledgeGraph.from_text("age of very:old greater-than 75 for person"))
print(apply_modifier("very", life, "old", 70, graph=defined),
      apply_modifier("very", life, "old", 80, graph=defined))
