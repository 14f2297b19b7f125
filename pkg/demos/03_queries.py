# # Queries with fuzzy terms and quantifiers

from pkn import KnowledgeGraph, parse_query
from pkn.query import run_query

PEOPLE = """\
Anne is-a person
age of Anne is 82
Bob is-a person
age of Bob is 30
range of age is young, middle-aged, old for person
age of young is 0, 39 for person
age of middle-aged is 40, 64 for person
age of old is 65, age-at-death for person
"""

graph = KnowledgeGraph.from_text(PEOPLE)

# ## Which people are very old?

result = run_query(graph, parse_query("which ?x where ?x is-a person and age of ?x is very:old"))
print(result.render())

# ## How many people are over 20?

print(run_query(graph, parse_query(
    "count ?x where age of ?x greater-than 20 from ?x is-a person")).render())

# ## Few, many, most
#
# Quantifiers compare the number of matches with the size of the `from` class.

roses = [f"r{i} kind-of rose" for i in range(10)]
roses += [f"color of r{i} includes {'yellow' if i < 2 else 'red'}" for i in range(10)]
garden = KnowledgeGraph.from_text("\n".join(roses))
for quantifier in ("few", "many", "most"):
    q = parse_query(f"{quantifier} ?x where color of ?x includes yellow from ?x kind-of rose")
    print(quantifier, run_query(garden, q).render(), end="")
