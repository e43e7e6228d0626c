"""Error hierarchy. Every error carries the process exit code the CLI reports."""


class PKGroupoidError(Exception):
    """Base class for all library errors"""

    exit_code: int = 1

    def __init__(self, message: str, witness: object = None):
        super().__init__(message)
        self.message = message
        self.witness = witness


class VerificationFailure(PKGroupoidError):
    exit_code = 1


class InputError(PKGroupoidError):
    exit_code = 2


class DescriptorError(InputError):
    """A JSON/YAML descriptor does not describe a valid object"""


class UnknownNameError(InputError):
    """A referenced group, category, class, section or progression does not exist"""


class GroupMismatchError(InputError):
    """Elements of different groups were combined"""


class CategoryMismatchError(InputError):
    """Morphisms are not composable, or objects come from different categories"""


class ClassMismatchError(InputError):
    """A transformation was applied to the wrong chord class"""


class MalformedExtensionError(InputError):
    """The data of a group extension is inconsistent"""


class SectionClosureError(InputError):
    """A section choice is not closed under composition or has nontrivial endomorphisms"""


class StructuralMismatchError(InputError):
    """The parts of a PK-net do not live over the same shape or group"""


class FiberError(InputError):
    """A point does not belong to the fiber it is paired with"""


class DisconnectedGroupoidError(InputError):
    """The operation needs a connected groupoid"""


class DegenerateCategoryError(InputError):
    """The category has no objects"""


class ResourceBoundError(PKGroupoidError):
    exit_code = 3


class NoTransportError(PKGroupoidError):
    """No morphism carries one network of a progression to the next"""

    exit_code = 4
