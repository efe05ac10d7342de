"""
Precategory Kernel Server - Main Application

This module contains the Flask application exposing the kernel over HTTP:
- Normalizing, composing and taking boundaries of cells
- Support, restriction and Conduché factorization
- Polyplex liftings, plex enumeration and presheaf checks
- Health and documentation pages
"""

from flask import Flask, request, jsonify, render_template_string
from flask_cors import CORS
from datetime import datetime
import logging

# Import configuration
import config

from precat import api
from precat.cells import InputError, Polygraph, PrecatError
from precat.functor import PolyMap
from precat.validation import validate_polygraph
from utils.fixtures import available_fixtures, load_fixture, load_fixture_map
from utils.serialization import polygraph_from_json, polymap_from_json

logger = logging.getLogger(__name__)

app = Flask(__name__)
CORS(app)


# =============================================================================
# Request helpers
# =============================================================================

def request_body():
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise InputError("request body must be a JSON object")
    return data


def require(data, key):
    if key not in data:
        raise InputError(f"missing field {key!r}")
    return data[key]


def polygraph_arg(data, key='polygraph', validate=True) -> Polygraph:
    """A polygraph is a fixture name or an inline polygraph object."""
    ref = require(data, key)
    if isinstance(ref, str):
        return load_fixture(ref, validate=validate)
    P = polygraph_from_json(ref)
    if validate:
        report = validate_polygraph(P)
        if not report['valid']:
            raise InputError(f"invalid polygraph: {report['errors'][0]['message']}")
    return P


def polymap_arg(data, key='map') -> PolyMap:
    ref = require(data, key)
    if isinstance(ref, str):
        return load_fixture_map(ref)
    return polymap_from_json(ref, config.FIXTURES_DIR)


OPERATIONS = {
    'validate': lambda d: api.handle_validate(polygraph_arg(d, validate=False)),
    'normalize': lambda d: api.handle_normalize(polygraph_arg(d), require(d, 'expr'), bool(d.get('oracle', False))),
    'compose': lambda d: api.handle_compose(polygraph_arg(d), require(d, 'left'), require(d, 'index'),
                                            require(d, 'right')),
    'boundary': lambda d: api.handle_boundary(polygraph_arg(d), require(d, 'expr'), require(d, 'sign'),
                                              require(d, 'dim')),
    'support': lambda d: api.handle_support(polygraph_arg(d), require(d, 'expr')),
    'restrict': lambda d: api.handle_restrict(polygraph_arg(d), require(d, 'expr')),
    'conduche': lambda d: api.handle_conduche(polymap_arg(d), require(d, 'expr'), require(d, 'first'),
                                              require(d, 'second'), require(d, 'index')),
    'polyplex': lambda d: api.handle_polyplex(polygraph_arg(d), require(d, 'expr')),
    'measure': lambda d: api.handle_measure(polygraph_arg(d), require(d, 'expr')),
    'plexes': lambda d: {'plexes': api.handle_plexes(require(d, 'dim'), d.get('weight', config.DEFAULT_WEIGHT),
                                                     d.get('length'))},
    'presheaf': lambda d: api.handle_presheaf(polygraph_arg(d), require(d, 'dim'),
                                              d.get('weight', config.DEFAULT_WEIGHT), d.get('length')),
    'makkai': lambda d: api.handle_makkai(polygraph_arg(d), d.get('weight'), d.get('table_weight')),
    'dot': lambda d: {'dot': api.handle_dot(polygraph_arg(d))},
}


# =============================================================================
# API Endpoints
# =============================================================================

@app.route('/api/precat/<operation>', methods=['POST'])
def run_operation(operation):
    """
    Run one kernel operation on the JSON request body.

    Input errors answer 400, domain errors (typing, boundary mismatch,
    non-principal elements, failed factorizations) answer 422.
    """
    handler = OPERATIONS.get(operation)
    if handler is None:
        return jsonify({'success': False, 'message': f'Unknown operation: {operation}'}), 404
    try:
        result = handler(request_body())
        logger.info(f"Completed {operation} request")
        return jsonify({'success': True, 'result': result})
    except InputError as e:
        logger.warning(f"Rejected {operation} request: {e}")
        return jsonify({'success': False, 'message': str(e),
                        'error': {'type': type(e).__name__, 'message': str(e)}}), 400
    except PrecatError as e:
        logger.warning(f"{operation} failed with {type(e).__name__}: {e}")
        return jsonify({'success': False, 'message': str(e),
                        'error': {'type': type(e).__name__, 'message': str(e)}}), 422
    except Exception as e:
        logger.error(f"Error processing {operation} request: {e}")
        return jsonify({'success': False, 'message': f'Error: {e}'}), 500


@app.route('/api/precat/fixtures', methods=['GET'])
def list_fixtures():
    return jsonify({'success': True, 'fixtures': available_fixtures()})


@app.route('/health', methods=['GET'])
def health_check():
    """
    Health check endpoint to verify the server is running properly.
    """
    try:
        health_response = {
            'status': 'healthy',
            'version': config.VERSION,
            'fixtures': len(available_fixtures()),
            'max_dim': config.MAX_DIM,
            'timestamp': datetime.now().isoformat()
        }

        # Add memory info
        import psutil
        memory = psutil.virtual_memory()
        health_response['memory'] = {
            'total': f"{memory.total / (1024 * 1024):.1f} MB",
            'available': f"{memory.available / (1024 * 1024):.1f} MB",
            'percent_used': f"{memory.percent}%"
        }

        return jsonify(health_response)
    except Exception as e:
        return jsonify({
            'status': 'error',
            'message': str(e),
            'timestamp': datetime.now().isoformat()
        }), 500


# API Documentation page
@app.route('/', methods=['GET'])
def api_documentation():
    """Serve the API documentation page."""
    html_template = '''
    <!DOCTYPE html>
    <html lang="en">
    <head>
        <meta charset="UTF-8">
        <title>Precategory Kernel API</title>
        <style>
            body { font-family: sans-serif; max-width: 860px; margin: 2rem auto; color: #1e293b; }
            code, pre { background: #f1f5f9; padding: 0.15rem 0.35rem; border-radius: 4px; }
            td { padding: 0.3rem 0.8rem; border-bottom: 1px solid #e2e8f0; vertical-align: top; }
        </style>
    </head>
    <body>
        <h1>Precategory Kernel API <small>v{{ version }}</small></h1>
        <p>Every operation is <code>POST /api/precat/&lt;operation&gt;</code> with a JSON body.
           <code>polygraph</code> is a fixture name or an inline polygraph object;
           cells are expression text (<code>"comp_0(gen f, gen g)"</code>), JSON expressions or normal forms.</p>
        <table>
            {% for name, fields in operations %}
            <tr><td><code>{{ name }}</code></td><td>{{ fields }}</td></tr>
            {% endfor %}
        </table>
        <p>Fixtures: {{ fixtures|join(', ') }}</p>
        <p>Input errors answer 400, domain errors 422. <code>GET /health</code> reports status and memory.</p>
    </body>
    </html>
    '''
    operations = [
        ('validate', 'polygraph'),
        ('normalize', 'polygraph, expr, oracle?'),
        ('compose', 'polygraph, left, index, right'),
        ('boundary', 'polygraph, expr, sign (- or +), dim'),
        ('support', 'polygraph, expr'),
        ('restrict', 'polygraph, expr'),
        ('conduche', 'map, expr, first, second, index'),
        ('polyplex', 'polygraph, expr'),
        ('measure', 'polygraph, expr'),
        ('plexes', 'dim, weight?, length?'),
        ('presheaf', 'polygraph, dim, weight?, length?'),
        ('makkai', 'polygraph, weight?, table_weight?'),
        ('dot', 'polygraph'),
    ]
    return render_template_string(html_template, version=config.VERSION, operations=operations,
                                  fixtures=available_fixtures())


# =============================================================================
# Application Entry Point
# =============================================================================

if __name__ == '__main__':
    logger.info(f"Starting Precategory Kernel Server on port {config.PORT}")
    logger.info(f"Fixtures directory: {config.FIXTURES_DIR}")
    app.run(host='0.0.0.0', port=config.PORT, debug=config.DEBUG)
