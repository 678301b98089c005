# models/base.py
from sqlalchemy.orm import DeclarativeBase


class Base(DeclarativeBase):
    """Clase base para los modelos del almacén de resultados."""
    pass
