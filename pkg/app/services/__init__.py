from services.InvolutivityService import InvolutivityService
from services.ClassificationService import ClassificationService
from services.TableService import TableService

__all__ = ["InvolutivityService", "ClassificationService", "TableService"]
