from l3_anomaly_platform.core.models.evasion_models import HypoglyphMap


class ConfusableFormatter:

    @staticmethod
    def normalize_confusables(text: str, hypoglyphs: HypoglyphMap) -> str:
        """Map every known confusable back to its Latin source."""
        return text.translate(hypoglyphs.inverse_table())

    @staticmethod
    def disguise(text: str, hypoglyphs: HypoglyphMap) -> str:
        return text.translate(hypoglyphs.forward_table())
