# Domain tests
