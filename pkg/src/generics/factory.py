from typing import Dict, Generic, List, Type, TypeVar

from loguru import logger

T = TypeVar("T")


class GenericFactory(Generic[T]):
    """Registry-backed factory; each subclass owns its own ``_registry``."""

    _registry: Dict[str, Type[T]] = {}

    @classmethod
    def create(cls, registered_type: str, **kwargs) -> T:
        """
        Create a registered instance.

        Args:
            registered_type (str): Key of the registered class.
            **kwargs: Arguments for the constructor.

        Returns:
            T: Instance of the requested class.

        Raises:
            ValueError: If the requested type is unknown.
        """
        _class = cls._registry.get(registered_type)
        if _class is None:
            logger.error(f"Unknown type for {cls.__name__}: {registered_type}")
            raise ValueError(
                f"Unknown type for {cls.__name__}: {registered_type}; "
                f"expected one of {cls.get_registered_types()}"
            )
        return _class(**kwargs)

    @classmethod
    def get_registered_types(cls) -> List[str]:
        """Get list of available registered names.

        Returns:
            List of available registered names.
        """
        return list(cls._registry.keys())
