# # Counter-arguments, analogies and RDF

from pkn import KnowledgeGraph, explain, parse_condition
from pkn.argumentation import ask
from pkn.model import Name
from pkn.rdf import to_turtle
from pkn.reasoner import complete_analogy

# ## Rebuttal
#
# A certain exclusion beats a merely high inclusion.

flamingo = KnowledgeGraph.from_text(
    "color of flamingo includes pink (certainty high)\ncolor of flamingo excludes pink")
verdict = ask(flamingo, parse_condition("color of flamingo includes pink"))
print(verdict.summary())
print(explain(verdict, flamingo))

# ## Undercut
#
# Robins fly because birds do, unless the kind-of link itself is denied.

birds = KnowledgeGraph.from_text(
    "locomotion of bird includes flying\nrobin kind-of bird\n{robin kind-of bird} is-a lie")
verdict = ask(birds, parse_condition("locomotion of robin includes flying"))
print(verdict.summary())
print(explain(verdict, birds))

# ## Completing an analogy

family = KnowledgeGraph.from_text("dog parent-of puppy\ncat parent-of kitten")
print(list(complete_analogy(family, Name("dog"), Name("puppy"), Name("cat"))))

# ## Exporting to Turtle
#
# Every statement becomes a blank node; lists become RDF collections.

print(to_turtle(KnowledgeGraph.from_text(
    "flowers of Netherlands includes daffodils, tulips (certainty high)\n"
    "Belgium similar-to Netherlands for latitude")))
