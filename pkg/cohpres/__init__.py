from flask import Flask
from .config import Config
import logging


def create_app(config_object=Config):
    app = Flask(__name__)
    app.config.from_object(config_object)

    # Configure logging
    logging.basicConfig(level=app.config["LOG_LEVEL"])
    app.logger.setLevel(app.config["LOG_LEVEL"])

    from .commands import bp
    app.register_blueprint(bp)

    return app
