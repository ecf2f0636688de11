from frontend.ast.node import Node


class TreePrinter:
    """Indented dump of a config AST, one node per line."""

    l = "["
    r = "]"
    lr = l + r

    def __init__(self, indentLen=2) -> None:
        self.indentLen = indentLen
        self.indentNum = 0
        self.lines: list[str] = []

    def work(self, element) -> None:
        if isinstance(element, Node):
            if element.is_leaf():
                self.printLine(str(element))
                return

            if len(element) == 0:
                self.printLine(f"{element.name} {self.lr}")
                return

            self.printLine(f"{element.name}{self.lineTag(element)} {self.l}")
            self.incIndent()
            for it in element:
                self.work(it)
            self.decIndent()
            self.printLine(self.r)

        else:
            self.printLine(repr(element))

    def lineTag(self, element: Node) -> str:
        return f" @{element.lineno}" if element.lineno else ""

    def printLine(self, s: str) -> None:
        self.lines.append(" " * self.indentLen * self.indentNum + s)

    def incIndent(self) -> None:
        self.indentNum += 1

    def decIndent(self) -> None:
        self.indentNum -= 1

    def render(self) -> str:
        return "\n".join(self.lines)


def render_tree(node: Node, indentLen: int = 2) -> str:
    printer = TreePrinter(indentLen)
    printer.work(node)
    return printer.render()
