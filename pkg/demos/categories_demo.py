"""Parse, print and apply categories."""

from triform.categories import Backward, backward_apply, forward_apply, parse_category, print_category, type_raise

verb = parse_category("(S/N)/N")
print("verb:", print_category(verb))
once = forward_apply(verb, parse_category("N"))
print("after one object:", print_category(once))

subject = parse_category("N")
raised = type_raise(subject, parse_category("S"))
print("raised subject:", print_category(raised))
print("raised subject takes N\\S:", print_category(forward_apply(raised, Backward(subject, parse_category("S")))))
print("plain backward application:", print_category(backward_apply(subject, parse_category("N\\S"))))
