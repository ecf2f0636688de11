from typing import Optional

from .scope import Scope


class ScopeStack:
    def __init__(self, rootscope: Scope) -> None:
        self.rootscope = rootscope
        self.stack: list[Scope] = [rootscope]
        # full path of the key whose value is being resolved, for array elements
        self.key: Optional[str] = None

    def push(self, scope: Scope) -> None:
        self.stack.append(scope)

    def pop(self) -> Scope:
        return self.stack.pop()

    def top(self) -> Scope:
        return self.stack[-1]

    def depth(self) -> int:
        return len(self.stack)

    def unwind(self, depth: int) -> None:
        del self.stack[depth:]
