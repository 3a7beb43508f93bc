from flask import Flask
from flask_limiter import Limiter
from flask_limiter.util import get_remote_address
from werkzeug.middleware.proxy_fix import ProxyFix

from app.config import Config

limiter = Limiter(key_func=get_remote_address)


def create_app(config_object=Config):
    app = Flask(__name__, instance_relative_config=True)
    app.config.from_object(config_object)
    app.wsgi_app = ProxyFix(app.wsgi_app, x_for=1, x_proto=1, x_host=1, x_prefix=1)

    limiter.init_app(app)

    from app.routes.suites import suites_bp
    from app.routes.bops import bops_bp

    app.register_blueprint(suites_bp)
    app.register_blueprint(bops_bp)

    from app.cli import axioms_command, bops_command, demo_perm_command, laws_command, theorems_command

    for command in (laws_command, axioms_command, theorems_command, demo_perm_command, bops_command):
        app.cli.add_command(command)

    return app
